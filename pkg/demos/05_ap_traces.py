"""Trace the AP estimate through a horizon on a few Heston paths.

Each row holds K_hat at one time for the MLE-fed auxiliary wealth, the
truth-fed version, and the realised AP of the true premium.
"""

from mvapcp import BacktestConfig
from mvapcp.experiments import heston_ap_traces

out = heston_ap_traces(n_samples=3, cfg=BacktestConfig.default(), seed=4)
for row in out["ap_traces"][::63]:
    print({k: round(v, 4) if isinstance(v, float) else v for k, v in row.items()})
