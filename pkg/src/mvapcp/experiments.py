"""Experiment drivers that produce the tables and plot data of the numerical study.

Each driver returns plain row dictionaries; :mod:`mvapcp.reports` turns them
into files.
"""

from __future__ import annotations

import numpy as np

from .backtest import BacktestConfig, monte_carlo_campaign, rolling_horizons, run_strategies
from .estimators import EstimationWindow, ap_trajectory, rolling_mle
from .market_models import MarketSpec, PricePath, TimeGrid, simulate, simulate_gbm_path

MONTHLY, WEEKLY, DAILY = 21 / 252, 12 / 252, 1 / 252


def table1_cell(mu, dt, sigma=0.1, r=0.02, n_reps=10_000, seed=0, horizon=1.0):
    """Spread of two risk-premium estimates from a one-year window at step ``dt``.

    Estimator ``a`` is the square root of the quadratic-variation AP estimate
    at the start of a horizon (built entirely from the mirror window);
    estimator ``b`` is the MLE ratio ``(mu_hat - r) / sigma_hat``. Both use a
    window of ``M = round(1/dt)`` returns.
    """
    n = round(horizon / dt)
    M = round(1 / dt)
    grid = TimeGrid(horizon=n * dt, steps=n, burn_in=n + M + 1)
    path = simulate_gbm_path(MarketSpec.gbm(mu, sigma, r), grid, seed, n_reps)
    a = np.sqrt(ap_trajectory(path, EstimationWindow(M, dt), r)[:, 0])
    m, s = rolling_mle(path.prices, M, dt, r)
    b = (m[:, grid.burn_in] - r) / s[:, grid.burn_in]
    return {
        "mu": mu, "sigma": sigma, "dt_days": round(dt * 252), "n_reps": n_reps,
        "std_a": float(a.std(ddof=1)), "std_b": float(b.std(ddof=1)),
        "mean_a": float(a.mean()), "mean_b": float(b.mean()),
        "true_premium": (mu - r) / sigma,
    }


def table1(mus=(0.08, 0.1, 0.12), dts=(MONTHLY, WEEKLY, DAILY), sigma=0.1, r=0.02, n_reps=10_000, seed=0):
    rows = []
    for i, mu in enumerate(mus):
        for j, dt in enumerate(dts):
            rows.append(table1_cell(mu, dt, sigma, r, n_reps, seed + 1000 * i + j))
    return rows


def _ledger_rows(result, label):
    rows = []
    for tag, led in result.ledgers.items():
        wT = np.atleast_1d(led.terminal_wealth)
        ret = np.atleast_1d(led.returns)
        tr = np.atleast_1d(led.turnover())
        for i in range(wT.size):
            rows.append({**label, "path": i, "strategy": tag, "terminal_wealth": float(wT[i]),
                         "return": float(ret[i]), "turnover": float(tr[i])})
    return rows


def _summary_rows(result, label):
    rows = []
    for tag, row in result.summary.items():
        out = {**label, "strategy": tag, **row, "sr_defined": bool(np.isfinite(row["sr"]))}
        key = next((k for k in result.welch if k[1] == tag), None)
        if key is not None:
            out["welch_vs"] = key[0]
            out["welch_t"], out["welch_p"] = result.welch[key]
        rows.append(out)
    return rows


def gbm_boxplots(mus=(0.08, 0.1, 0.12), sigma=0.1, cfg: BacktestConfig | None = None, n_paths=10_000,
                 seed=0, strategies=("A", "B", "N", "T")):
    """Per-path mean CP estimates (A vs B) and terminal wealth per strategy."""
    cfg = cfg or BacktestConfig.default()
    cp_rows, ledgers, summary = [], [], []
    for i, mu in enumerate(mus):
        res = monte_carlo_campaign(MarketSpec.gbm(mu, sigma, cfg.r), cfg, n_paths, strategies, seed + i)
        label = {"mu": mu, "sigma": sigma}
        sig = res.signals
        cp_a = sig.A_hat.mean(axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            cp_b = (((sig.mu_hat - cfg.r) / sig.sigma_hat) ** 2).mean(axis=-1)
        for p in range(n_paths):
            cp_rows.append({**label, "path": p, "strategy": "A", "mean_cp": float(cp_a[p])})
            cp_rows.append({**label, "path": p, "strategy": "B", "mean_cp": float(cp_b[p])})
        ledgers += _ledger_rows(res, label)
        summary += _summary_rows(res, label)
    return {"summary": summary, "ledgers": ledgers, "cp_estimates": cp_rows}


def heston_campaign(iotas=(40, 42.5, 45), kappas=(-0.6, -0.7, -0.8), cfg: BacktestConfig | None = None,
                    n_paths=10_000, seed=0, strategies=("A", "B", "N", "T"), a=8.5, k_level=0.01, v=0.6,
                    x0=0.02):
    """CEQ/SR/TR over a grid of mean-reversion speeds and correlations."""
    cfg = cfg or BacktestConfig.default()
    ledgers, summary = [], []
    n = 0
    for iota in iotas:
        for kappa in kappas:
            spec = MarketSpec.heston(a, iota, k_level, v, kappa, x0, cfg.r)
            res = monte_carlo_campaign(spec, cfg, n_paths, strategies, seed + n)
            n += 1
            label = {"iota": iota, "kappa": kappa}
            ledgers += _ledger_rows(res, label)
            summary += _summary_rows(res, label)
    return {"summary": summary, "ledgers": ledgers}


def heston_ap_traces(n_samples=6, cfg: BacktestConfig | None = None, seed=0, spec: MarketSpec | None = None):
    """AP trajectories: quadratic-variation estimate, MLE plug-in, and truth."""
    cfg = cfg or BacktestConfig.default()
    spec = spec or MarketSpec.heston(r=cfg.r)
    path = simulate(spec, cfg.grid, seed, n_samples)
    g = cfg.grid
    B, N = g.burn_in, g.steps
    K_qv = ap_trajectory(path, cfg.window, cfg.r)
    mu, sigma = rolling_mle(path.prices, cfg.window.M, g.dt, cfg.r)
    K_mle = ((mu[:, B : B + N] - cfg.r) / sigma[:, B : B + N]) ** 2
    A_true = ((path.mu - cfg.r) / path.sigma) ** 2
    K_true = np.trapezoid(A_true[:, B:], dx=g.dt, axis=-1) / g.horizon
    rows = []
    for s in range(n_samples):
        for k in range(N):
            rows.append({"sample": s, "k": k, "t": k * g.dt, "price": float(path.prices[s, B + k]),
                         "K_hat_A": float(K_qv[s, k]), "K_hat_B": float(K_mle[s, k]),
                         "K_true": float(K_true[s])})
    return {"ap_traces": rows, "summary": [], "ledgers": []}


def real_market(path: PricePath, cfg: BacktestConfig | None = None, strategies=("A+N", "A", "B", "N"),
                label=None):
    """Rolling one-year horizons over an observed, discounted price series."""
    cfg = cfg or BacktestConfig.default()
    res = rolling_horizons(path, cfg, strategies)
    label = label or {"series": path.meta.get("source", "prices")}
    return {"summary": _summary_rows(res, label), "ledgers": _ledger_rows(res, label),
            "n_horizons": len(next(iter(res.checksums.values())))}
