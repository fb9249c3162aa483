"""Rolling-horizon backtest on an observed price file.

Pass a CSV with header date,close. Without one, a synthetic random walk
is written to a temporary file so the walk-through still runs.
"""

import sys
import tempfile
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from mvapcp import BacktestConfig
from mvapcp.experiments import real_market
from mvapcp.reports import ingest_prices

if len(sys.argv) > 1:
    src = Path(sys.argv[1])
else:
    rng = np.random.default_rng(0)
    closes = 100 * np.exp(np.cumsum(rng.normal(0.0003, 0.01, 900)))
    src = Path(tempfile.mkdtemp()) / "synthetic.csv"
    start = date(2010, 1, 4)
    src.write_text("date,close\n" + "".join(
        f"{start + timedelta(days=i)},{c!r}\n" for i, c in enumerate(closes.tolist())))

path = ingest_prices(src, r=0.02)
print(f"{src.name}: {path.prices.size} closes, {path.meta['first_date']} to {path.meta['last_date']}")
cfg = BacktestConfig.default(horizon=60 / 252, steps=60, M=120)
out = real_market(path, cfg, ("A+N", "A", "B", "N"))
print(f"{out['n_horizons']} rolling horizons")
for row in out["summary"]:
    print(f"{row['strategy']:>4}: CEQ {row['ceq']:.4g}  SR {row['sr']:.4g}  TR {row['tr']:.4g}")
