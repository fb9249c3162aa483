import numpy as np
import pytest

from mvapcp import BacktestConfig, MarketSpec, PricePath, TimeGrid


@pytest.fixture
def small_cfg():
    # short horizon keeps Monte Carlo tests quick
    return BacktestConfig.default(horizon=20 / 252, steps=20, M=30)


@pytest.fixture
def gbm_spec():
    return MarketSpec.gbm(0.1, 0.1, 0.02)


def make_path(prices, burn_in=0, mu=None, sigma=None, dt=1 / 252):
    prices = np.asarray(prices, dtype=float)
    steps = prices.shape[-1] - 1 - burn_in
    grid = TimeGrid(horizon=steps * dt, steps=steps, burn_in=burn_in)
    return PricePath(grid, prices, mu, sigma)


# one line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
