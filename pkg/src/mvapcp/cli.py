"""Command-line entry point: ``mvapcp {table1,gbm,heston,ap-traces,real}``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import experiments
from .backtest import BacktestConfig
from .errors import MvapcpError
from .reports import (
    ensure_out_dir,
    ingest_prices,
    pivot_table,
    read_config,
    resolve_config,
    write_csv,
    write_manifest,
)

KINDS = {
    "table1": "table1",
    "gbm": "gbm_boxplots",
    "heston": "heston_campaign",
    "ap-traces": "heston_ap_traces",
    "real": "real_market",
}

logger = logging.getLogger("mvapcp")


def backtest_config(c) -> BacktestConfig:
    return BacktestConfig.default(
        horizon=c["horizon"], steps=c["steps"], M=c["window"], gamma=c["gamma"], r=c["r"],
        w0=c["w0"], signed=c["signed"], sigma_threshold=c["sigma_threshold"],
    )


def run_experiment(kind: str, c: dict):
    """Run one experiment and write its files into ``c['out']``.

    Every run writes ``summary.csv``, ``ledgers.csv`` and ``manifest.txt``;
    some kinds add table or plot-data files. Returns the written paths.
    """
    if kind not in KINDS:
        raise MvapcpError(f"unknown experiment {kind!r}; choose from {sorted(KINDS)}")
    out = ensure_out_dir(c["out"])
    written = {}
    extra = {}

    if kind == "table1":
        rows = experiments.table1(c["mus"], c["dts"], c["sigma"], c["r"], c["reps"], c["seed"])
        result = {"summary": rows, "ledgers": []}
    else:
        cfg = backtest_config(c)
        if kind == "gbm":
            strategies = c["strategies"] or ("A", "B", "N", "T")
            result = experiments.gbm_boxplots(c["mus"], c["sigma"], cfg, c["paths"], c["seed"], strategies)
        elif kind == "heston":
            strategies = c["strategies"] or ("A", "B", "N", "T")
            result = experiments.heston_campaign(c["iotas"], c["kappas"], cfg, c["paths"], c["seed"],
                                                 strategies, c["a"], c["k_level"], c["v"], c["x0"])
            for metric in ("ceq", "sr", "tr"):
                rows, cols = pivot_table(result["summary"], metric, ("iota", "kappa"), strategies)
                written[metric] = out / f"{metric}.csv"
                write_csv(written[metric], rows, cols)
        elif kind == "ap-traces":
            from .market_models import MarketSpec

            iota = c["iotas"][len(c["iotas"]) // 2]
            kappa = c["kappas"][len(c["kappas"]) // 2]
            spec = MarketSpec.heston(c["a"], iota, c["k_level"], c["v"], kappa, c["x0"], c["r"])
            result = experiments.heston_ap_traces(c["samples"], cfg, c["seed"], spec)
        else:
            if not c["prices"]:
                raise MvapcpError("the real experiment needs a price file (--prices)")
            strategies = c["strategies"] or ("A+N", "A", "B", "N")
            path = ingest_prices(c["prices"], c["r"])
            result = experiments.real_market(path, cfg, strategies)
            extra = {"n_horizons": result["n_horizons"], "first_date": path.meta["first_date"],
                     "last_date": path.meta["last_date"]}
            for metric in ("ceq", "sr", "tr"):
                rows, cols = pivot_table(result["summary"], metric, ("series",), strategies)
                written[metric] = out / f"{metric}.csv"
                write_csv(written[metric], rows, cols)

    for name in ("cp_estimates", "ap_traces"):
        if name in result:
            written[name] = out / f"{name}.csv"
            write_csv(written[name], result[name])
    written["summary"] = out / "summary.csv"
    write_csv(written["summary"], result["summary"])
    written["ledgers"] = out / "ledgers.csv"
    write_csv(written["ledgers"], result["ledgers"],
              None if result["ledgers"] else ["path", "strategy", "terminal_wealth", "return", "turnover"])
    written["manifest"] = out / "manifest.txt"
    write_manifest(written["manifest"], kind, c, extra)
    return written


def build_parser():
    p = argparse.ArgumentParser(prog="mvapcp", description=__doc__)
    sub = p.add_subparsers(dest="kind", required=True)
    for name in KINDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="flat key = value config file")
        s.add_argument("--seed", type=int)
        s.add_argument("--paths", type=int)
        s.add_argument("--out")
        s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override any config key")
        if name == "real":
            s.add_argument("--prices", help="CSV file with header date,close")
        if name == "table1":
            s.add_argument("--reps", type=int)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        file_values = read_config(args.config) if args.config else {}
        overrides = dict(kv.split("=", 1) for kv in args.set)
        for key in ("seed", "paths", "out", "prices", "reps"):
            if getattr(args, key, None) is not None:
                overrides[key] = getattr(args, key)
        c = resolve_config(file_values, overrides)
        written = run_experiment(args.kind, c)
    except (MvapcpError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for name, path in written.items():
        logger.info("wrote %s: %s", name, path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
