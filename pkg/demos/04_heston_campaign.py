"""Heston campaign over a small grid of mean-reversion speeds and correlations.

Tables of CEQ, Sharpe ratio and turnover are pivoted one row per setting.
"""

from mvapcp import BacktestConfig
from mvapcp.experiments import heston_campaign
from mvapcp.reports import pivot_table

cfg = BacktestConfig.default()
strategies = ("A", "B", "N", "T")
out = heston_campaign(iotas=(42.5,), kappas=(-0.6, -0.7), cfg=cfg, n_paths=500, seed=1, strategies=strategies)
for metric in ("ceq", "sr", "tr"):
    rows, cols = pivot_table(out["summary"], metric, ("iota", "kappa"), strategies)
    print(metric.upper())
    for row in rows:
        print("  " + "  ".join(f"{c}={row[c]:.4g}" for c in cols))
