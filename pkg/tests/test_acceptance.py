"""End-to-end acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line that pytest prints in the terminal
summary. Criteria 4 and 5 compare against published reference numbers
that this implementation does not reproduce; they are left failing
rather than loosened.
"""

import datetime as dt
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from mvapcp import (
    BacktestConfig,
    DataError,
    EstimationWindow,
    MarketSpec,
    PricePath,
    TimeGrid,
    build_aux_wealth,
    horizon_count,
    monte_carlo_campaign,
    rolling_horizons,
    simulate,
    simulate_gbm_path,
    premium_error_reduced,
    welch_test,
)
from mvapcp.backtest import run_backtest, run_strategies
from mvapcp.cli import main
from mvapcp.experiments import DAILY, MONTHLY, WEEKLY, gbm_boxplots, table1_cell
from mvapcp.reports import ingest_prices

pytestmark = pytest.mark.slow


def record(n, checks, detail=""):
    """Log one line for criterion ``n`` and fail unless every check holds."""
    failed = [name for name, ok in checks.items() if not ok]
    status = "PASS" if not failed else "FAIL"
    line = f"criterion {n}: {status}  {detail}"
    if failed:
        line += f"  failed: {', '.join(failed)}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failed, line


def test_criterion_1_table1():
    t0 = time.perf_counter()
    cells = [table1_cell(0.1, d, 0.1, 0.02, 10_000, seed=7 + i) for i, d in enumerate((MONTHLY, WEEKLY, DAILY))]
    elapsed = time.perf_counter() - t0
    a = [c["std_a"] for c in cells]
    b_daily = cells[-1]["std_b"]
    record(1, {
        "std_b in [0.95, 1.05]": 0.95 <= b_daily <= 1.05,
        "std_a in [0.45, 0.70]": 0.45 <= a[-1] <= 0.70,
        "std_a decreasing in dt": a[0] > a[1] > a[2],
        "runtime < 300 s": elapsed < 300,
    }, f"std_b={b_daily:.4f} std_a(21,12,1 days)=({a[0]:.4f}, {a[1]:.4f}, {a[2]:.4f}) {elapsed:.1f}s")


def _qv_over_t(steps, seed):
    dt_ = 1.0 / steps
    grid = TimeGrid(1.0, steps)
    path = simulate_gbm_path(MarketSpec.gbm(0.1, 0.1, 0.02), grid, seed, 1000)
    aux = build_aux_wealth(path, EstimationWindow(steps, dt_), 0.02, 0, steps, truth=True)
    return np.sum(aux.increments**2, axis=-1) / grid.horizon


def test_criterion_2_quadratic_variation_convergence():
    k252 = _qv_over_t(252, 1)
    k504 = _qv_over_t(504, 2)
    ratio = k252.std() / k504.std()
    record(2, {
        "mean within 2% of 0.64": abs(k252.mean() / 0.64 - 1) <= 0.02,
        "std ratio 1.41 +- 0.15": abs(ratio - 1.41) <= 0.15,
    }, f"mean={k252.mean():.4f} std252={k252.std():.4f} std504={k504.std():.4f} ratio={ratio:.3f}")


def test_criterion_3_error_reduction_property():
    rng = np.random.default_rng(2024)
    held, hyp = 0, 0
    while hyp < 10_000:
        mu, r = rng.uniform(-0.3, 0.5), rng.uniform(0.0, 0.1)
        sigma = rng.uniform(0.02, 0.8)
        sigma_hat = sigma * rng.uniform(1.0001, 4.0)
        p = abs(mu - r) / sigma
        # |premium_hat| beyond sqrt(2) |premium|, either sign
        ph = (np.sqrt(2) * p + rng.uniform(1e-6, 3.0)) * rng.choice([-1, 1])
        mu_hat = r + ph * sigma_hat
        res = premium_error_reduced(mu, sigma, mu_hat, sigma_hat, r)
        if res is None:
            continue
        hyp += 1
        held += res is True
    bad_claims = 0
    for _ in range(10_000):
        mu, r, sigma = rng.uniform(-0.3, 0.5), rng.uniform(0.0, 0.1), rng.uniform(0.02, 0.8)
        p = abs(mu - r) / sigma
        if rng.random() < 0.5:
            sigma_hat = sigma * rng.uniform(0.2, 1.0)
            mu_hat = r + rng.uniform(-3, 3) * sigma_hat
        else:
            sigma_hat = sigma * rng.uniform(1.0001, 4.0)
            mu_hat = r + rng.uniform(-1, 1) * np.sqrt(2) * p * sigma_hat
        bad_claims += premium_error_reduced(mu, sigma, mu_hat, sigma_hat, r) is not None
    record(3, {
        "holds in all hypothesis tuples": held == hyp,
        "violations give not-applicable": bad_claims == 0,
    }, f"held {held}/{hyp}; non-applicable claims {bad_claims}/10000")


def test_criterion_4_heston_campaign():
    cfg = BacktestConfig.default()
    t0 = time.perf_counter()
    res = monte_carlo_campaign(MarketSpec.heston(iota=42.5, kappa=-0.7), cfg, 2000, ("A", "B", "N", "T"), seed=42)
    elapsed = time.perf_counter() - t0
    s = res.summary
    ret = {k: led.returns for k, led in res.ledgers.items()}
    p_an = welch_test(ret["A"], ret["N"])[1]
    p_nb = welch_test(ret["N"], ret["B"])[1]
    record(4, {
        "CEQ A > N (p<0.01)": s["A"]["ceq"] > s["N"]["ceq"] and p_an < 0.01,
        "CEQ N > B (p<0.01)": s["N"]["ceq"] > s["B"]["ceq"] and p_nb < 0.01,
        "CEQ(A) 0.1284 +- 0.02": abs(s["A"]["ceq"] - 0.1284) <= 0.02,
        "CEQ(T) 0.1344 +- 0.02": abs(s["T"]["ceq"] - 0.1344) <= 0.02,
        "TR(N) == 0": s["N"]["tr"] == 0.0,
        "TR(A) < TR(B)": s["A"]["tr"] < s["B"]["tr"],
        "TR(A) 3.4759 +- 1.0": abs(s["A"]["tr"] - 3.4759) <= 1.0,
        "SR(A) 0.8074 +- 0.1": abs(s["A"]["sr"] - 0.8074) <= 0.1,
        "runtime < 600 s": elapsed < 600,
    }, "CEQ A/B/N/T={:.4g}/{:.4g}/{:.4g}/{:.4g} SR(A)={:.4g} TR A/B/N/T={:.4g}/{:.4g}/{:.4g}/{:.4g} "
       "p(A,N)={:.3g} p(N,B)={:.3g} {:.1f}s".format(
           s["A"]["ceq"], s["B"]["ceq"], s["N"]["ceq"], s["T"]["ceq"], s["A"]["sr"],
           s["A"]["tr"], s["B"]["tr"], s["N"]["tr"], s["T"]["tr"], p_an, p_nb, elapsed))


def test_criterion_5_gbm_case():
    cfg = BacktestConfig.default()
    out = gbm_boxplots((0.1,), 0.1, cfg, 10_000, seed=5, strategies=("A", "B"))
    wealth = {k: np.array([r["terminal_wealth"] for r in out["ledgers"] if r["strategy"] == k]) for k in "AB"}
    cp = {k: np.array([r["mean_cp"] for r in out["cp_estimates"] if r["strategy"] == k]) for k in "AB"}
    t, p = welch_test(wealth["A"], wealth["B"])
    record(5, {
        "mean W_T(A) > mean W_T(B), p<0.05": wealth["A"].mean() > wealth["B"].mean() and p < 0.05,
        "CP dispersion A < B": cp["A"].std() < cp["B"].std(),
    }, f"mean W_T A={wealth['A'].mean():.4g} B={wealth['B'].mean():.4g} p={p:.3g}; "
       f"median W_T A={np.median(wealth['A']):.4g} B={np.median(wealth['B']):.4g}; "
       f"CP std A={cp['A'].std():.4g} B={cp['B'].std():.4g}")


def test_criterion_6_deterministic_replay(tmp_path):
    small = ["--seed", "11", "--set", "steps=10", "--set", "window=12", "--set", "horizon=10/252"]
    runs = {
        "table1": ["--reps", "50", "--set", "dts=1/12"],
        "gbm": ["--paths", "20", "--set", "mus=0.1"],
        "heston": ["--paths", "20", "--set", "iotas=42.5", "--set", "kappas=-0.7"],
        "ap-traces": ["--set", "samples=3"],
        "real": ["--prices", str(_write(tmp_path / "px.csv", 100 + np.sin(np.arange(60)) * 3))],
    }
    diffs = []
    for kind, extra in runs.items():
        for rep in ("a", "b"):
            assert main([kind, "--out", str(tmp_path / kind / rep), *small, *extra]) == 0
        for f in sorted((tmp_path / kind / "a").glob("*.csv")):
            if f.read_bytes() != (tmp_path / kind / "b" / f.name).read_bytes():
                diffs.append(f"{kind}/{f.name}")
    record(6, {"byte-identical data files": not diffs}, f"compared {len(runs)} experiments; diffs={diffs}")


def test_criterion_7_self_financing_and_no_look_ahead():
    cfg = BacktestConfig.default(horizon=30 / 252, steps=30, M=40)
    checks = {}
    for name, spec in (("gbm", MarketSpec.gbm(0.1, 0.1)), ("heston", MarketSpec.heston())):
        path = simulate(spec, cfg.grid, 3, 50)
        ledgers, _ = run_strategies(path, cfg, ("A", "B", "N", "T", "A+N"))
        for tag, led in ledgers.items():
            W, th, S = led.wealth, led.theta, led.prices
            again = W[:, :-1] + th[:, :-1] * (S[:, 1:] - S[:, :-1]) / S[:, :-1]
            checks[f"{name} {tag} self-financing"] = np.array_equal(again, W[:, 1:])
        single = path.path(0)
        B = cfg.grid.burn_in
        rng = np.random.default_rng(1)
        for tag in ("A", "B", "N", "T", "A+N"):
            base = run_backtest(single, cfg, tag)
            ok = True
            for k in range(0, cfg.grid.steps, 3):
                prices = single.prices.copy()
                tail = prices[B + k + 1:]
                prices[B + k + 1:] = tail[rng.permutation(tail.size)]
                other = run_backtest(PricePath(single.grid, prices, single.mu, single.sigma), cfg, tag)
                ok &= np.array_equal(other.theta[: k + 1], base.theta[: k + 1])
            checks[f"{name} {tag} no look-ahead"] = ok
    record(7, checks, f"{len(checks)} checks over A, B, N, T, A+N on GBM and Heston paths")


def _write(path, closes, start=dt.date(2000, 1, 3)):
    with open(path, "w") as fh:
        fh.write("date,close\n")
        for i, c in enumerate(closes):
            fh.write(f"{(start + dt.timedelta(days=i)).isoformat()},{float(c)!r}\n")
    return path


def test_criterion_8_real_market_substitutes(tmp_path):
    checks = {}
    rng = np.random.default_rng(8)
    # 2,520 daily steps: 2,521 closes
    closes = 100 * np.exp(np.cumsum(np.concatenate([[0.0], rng.normal(0.0003, 0.01, 2520)])))
    f = _write(tmp_path / "series.csv", closes)
    path = ingest_prices(f, r=0.0)
    checks["round trip exact"] = np.array_equal(path.prices, closes)
    disc = ingest_prices(f, r=0.02)
    checks["discounting"] = np.allclose(disc.prices, closes * np.exp(-0.02 * np.arange(2521) / 252), rtol=1e-14)
    bad = closes.copy()
    bad[6] = -3.0
    try:
        ingest_prices(_write(tmp_path / "bad.csv", bad))
        checks["bad row named"] = False
    except DataError as exc:
        checks["bad row named"] = exc.index == 7 and "row 7" in str(exc)

    # 504 burn-in steps with a 252-step horizon
    cfg = BacktestConfig(grid=TimeGrid(1.0, 252, burn_in=504), window=EstimationWindow(251))
    checks["formula 2521 - 504 - 252 = 1765"] = horizon_count(2521, 504, 252) == 1765
    res = rolling_horizons(path, cfg, ("N",))
    n_run = res.ledgers["N"].wealth.shape[0]
    checks["rolling run yields 1765 horizons"] = n_run == 1765

    flat = ingest_prices(_write(tmp_path / "flat.csv", [50.0] * 2521), r=0.0)
    flat_res = rolling_horizons(flat, cfg, ("A+N", "A", "B", "N"))
    s = flat_res.summary
    checks["flat CEQ(N) == 0"] = s["N"]["ceq"] == 0.0
    checks["flat SR undefined"] = all(np.isnan(row["sr"]) for row in s.values())
    checks["flat TR(N) == 0"] = s["N"]["tr"] == 0.0
    record(8, checks, f"horizons={n_run}")
