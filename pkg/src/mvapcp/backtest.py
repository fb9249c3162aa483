"""Step-through backtest of the position rules plus Monte Carlo and rolling drivers.

At each ``t_k`` the engine re-estimates from prices up to and including
``S_{t_k}``, sets the position, and rolls wealth forward with the
self-financing update. All paths of a batch advance together.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field

import numpy as np

from . import metrics
from .errors import DataError, InvalidSpecError, WindowError
from .estimators import SIGMA_FLOOR, EstimationWindow, ap_trajectory, premium_sign, rolling_mle
from .market_models import MarketSpec, PricePath, TimeGrid, simulate
from .strategies import (
    STRATEGIES,
    RiskPreferences,
    theta_combined,
    theta_precommit,
    theta_strategy_B,
    theta_true,
    true_ap,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BacktestConfig:
    grid: TimeGrid = field(default_factory=TimeGrid.for_estimation)
    window: EstimationWindow = field(default_factory=EstimationWindow)
    prefs: RiskPreferences = field(default_factory=RiskPreferences)
    w0: float = 1.0
    signed: bool = True
    sigma_threshold: float = 0.1
    sigma_floor: float = SIGMA_FLOOR

    def __post_init__(self):
        if not np.isclose(self.window.dt, self.grid.dt, rtol=1e-12, atol=0.0):
            raise InvalidSpecError(f"window dt {self.window.dt} differs from grid dt {self.grid.dt}")
        need = self.grid.steps + self.window.M + 1
        if self.grid.burn_in < need:
            raise InvalidSpecError(
                f"burn-in of {self.grid.burn_in} steps is shorter than the {need} the estimators need"
            )
        if not self.w0 > 0:
            raise InvalidSpecError("w0 must be positive")

    @classmethod
    def default(cls, horizon=1.0, steps=252, M=252, gamma=1.4, r=0.02, **kw):
        grid = TimeGrid.for_estimation(horizon, steps, M)
        return cls(grid=grid, window=EstimationWindow(M, grid.dt), prefs=RiskPreferences(gamma, r), **kw)

    @property
    def r(self):
        return self.prefs.r


@dataclass
class Signals:
    """Estimates (and truths) at ``t_0 .. t_{N-1}``; arrays of shape ``(..., N)``."""

    mu_hat: np.ndarray
    sigma_hat: np.ndarray
    K_hat: np.ndarray
    A_hat: np.ndarray
    mu_true: np.ndarray | None = None
    sigma_true: np.ndarray | None = None
    K_true: np.ndarray | None = None

    @property
    def clamped(self):
        return self.sigma_hat < SIGMA_FLOOR


@dataclass
class WealthLedger:
    """Per-time wealth and positions of one strategy (one row per path).

    ``theta[..., N]`` is the un-rebalanced holding carried to ``T``; it only
    enters the turnover sum, where it contributes zero.
    """

    strategy: str
    wealth: np.ndarray
    theta: np.ndarray
    prices: np.ndarray
    estimates: dict = field(default_factory=dict)
    clamped: np.ndarray | None = None

    @property
    def risky_weight(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.theta / self.wealth

    @property
    def terminal_wealth(self):
        return self.wealth[..., -1]

    @property
    def returns(self):
        return (self.wealth[..., -1] - self.wealth[..., 0]) / self.wealth[..., 0]

    def turnover(self):
        return metrics.turnover(self)


def wealth_step(W, theta, S_now, S_next):
    """``W + theta * (S_next - S_now) / S_now``."""
    if np.any(np.asarray(S_now) <= 0):
        raise DataError("current price must be positive")
    return W + theta * (S_next - S_now) / S_now


def compute_signals(path: PricePath, cfg: BacktestConfig) -> Signals:
    g = path.grid
    if g != cfg.grid:
        raise InvalidSpecError("path grid does not match the backtest grid")
    B, N = g.burn_in, g.steps
    mu, sigma = rolling_mle(path.prices, cfg.window.M, g.dt, cfg.r)
    horizon = slice(B, B + N)
    missing = np.isnan(np.atleast_2d(sigma[..., horizon])).any(axis=0)
    if missing.any():
        k = int(np.flatnonzero(missing)[0])
        raise WindowError(f"no estimation window at t_{k}", index=k)
    K = ap_trajectory(path, cfg.window, cfg.r, floor=cfg.sigma_floor)
    sig = Signals(mu[..., horizon], sigma[..., horizon], K, K)
    if path.has_truth:
        sig.mu_true = path.mu[..., horizon]
        sig.sigma_true = path.sigma[..., horizon]
        sig.K_true = true_ap(path.mu[..., B:], path.sigma[..., B:], cfg.r, g.dt, g.horizon)
    return sig


def _position(tag, k, W, sig: Signals, cfg: BacktestConfig):
    p, T, w0 = cfg.prefs, cfg.grid.horizon, cfg.w0
    if tag in ("A", "A+N"):
        sign = premium_sign(sig.mu_hat[..., k], p.r) if cfg.signed else 1.0
        th = theta_precommit(W, w0, sig.K_hat[..., k], sig.A_hat[..., k], sig.sigma_hat[..., k],
                             sign, p, T, cfg.sigma_floor)
        if tag == "A+N":
            th = theta_combined(sig.sigma_hat[..., k], th, W, cfg.sigma_threshold)
        return th
    if tag == "B":
        return theta_strategy_B(W, w0, sig.mu_hat[..., k], sig.sigma_hat[..., k], p, T, cfg.sigma_floor)
    if tag == "T":
        if sig.K_true is None:
            raise InvalidSpecError("strategy T needs a simulated path with true coefficients")
        return theta_true(W, w0, sig.K_true, sig.mu_true[..., k], sig.sigma_true[..., k], p, T, cfg.sigma_floor)
    raise InvalidSpecError(f"unknown strategy {tag!r}")


def run_backtest(path: PricePath, cfg: BacktestConfig, strategy="A", signals: Signals | None = None) -> WealthLedger:
    """Run one strategy over the horizon of every path in ``path``."""
    if strategy not in STRATEGIES:
        raise InvalidSpecError(f"unknown strategy {strategy!r}")
    g = path.grid
    B, N = g.burn_in, g.steps
    S = path.prices[..., B:]
    if strategy != "N" and signals is None:
        signals = compute_signals(path, cfg)
    shape = S.shape
    W = np.empty(shape)
    theta = np.empty(shape)
    W[..., 0] = cfg.w0
    for k in range(N):
        if strategy == "N":
            # held units are never traded; the amount drifts with the price
            theta[..., k] = W[..., 0] if k == 0 else theta[..., k - 1] * (S[..., k] / S[..., k - 1])
        else:
            theta[..., k] = _position(strategy, k, W[..., k], signals, cfg)
        W[..., k + 1] = W[..., k] + theta[..., k] * (S[..., k + 1] - S[..., k]) / S[..., k]
    theta[..., N] = theta[..., N - 1] * (S[..., N] / S[..., N - 1])
    estimates = {}
    clamped = None
    if signals is not None:
        estimates = {"mu_hat": signals.mu_hat, "sigma_hat": signals.sigma_hat,
                     "K_hat": signals.K_hat, "A_hat": signals.A_hat}
        clamped = signals.clamped
    return WealthLedger(strategy, W, theta, S, estimates, clamped)


def price_checksum(prices) -> list[str]:
    rows = np.atleast_2d(np.ascontiguousarray(prices, dtype=float))
    return [hashlib.sha1(row.tobytes()).hexdigest() for row in rows]


@dataclass
class CampaignResult:
    ledgers: dict
    summary: dict
    welch: dict
    checksums: dict
    signals: Signals | None = None


def summarize(ledgers: dict, cfg: BacktestConfig):
    """CEQ, SR and TR per strategy plus Welch tests of A against the rest."""
    summary, welch = {}, {}
    for tag, led in ledgers.items():
        ret = np.atleast_1d(led.returns)
        row = {"n": ret.size, "mean_return": float(ret.mean()), "std_return": float(ret.std()),
               "mean_terminal_wealth": float(np.mean(led.terminal_wealth))}
        row["ceq"] = metrics.ceq(ret, cfg.prefs.gamma) if ret.size >= 2 else float("nan")
        try:
            row["sr"] = metrics.sharpe(ret, cfg.r)
        except Exception:
            row["sr"] = float("nan")
        row["tr"] = float(np.mean(led.turnover()))
        summary[tag] = row
    base = "A" if "A" in ledgers else ("A+N" if "A+N" in ledgers else None)
    if base:
        x = np.atleast_1d(ledgers[base].returns)
        for tag, led in ledgers.items():
            if tag == base:
                continue
            try:
                welch[(base, tag)] = metrics.welch_test(x, np.atleast_1d(led.returns))
            except Exception:
                welch[(base, tag)] = (float("nan"), float("nan"))
    return summary, welch


def run_strategies(path: PricePath, cfg: BacktestConfig, strategies=("A", "B", "N", "T")):
    needs = [s for s in strategies if s != "N"]
    signals = compute_signals(path, cfg) if needs else None
    ledgers = {s: run_backtest(path, cfg, s, signals) for s in strategies}
    return ledgers, signals


def monte_carlo_campaign(spec: MarketSpec, cfg: BacktestConfig, n_paths: int,
                         strategies=("A", "B", "N", "T"), seed=0) -> CampaignResult:
    """Feed the same simulated paths to every strategy and summarise.

    Path ``i`` is generated from the stream ``(seed, i)`` so results do not
    depend on how many other paths are simulated.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be positive")
    path = simulate(spec, cfg.grid, seed, n_paths)
    logger.info("simulated %d %s paths", n_paths, spec.kind)
    ledgers, signals = run_strategies(path, cfg, strategies)
    summary, welch = summarize(ledgers, cfg)
    checks = {s: price_checksum(led.prices) for s, led in ledgers.items()}
    return CampaignResult(ledgers, summary, welch, checks, signals)


def horizon_count(n_prices: int, burn_in: int, steps: int) -> int:
    """Number of one-step-stride horizons a series of ``n_prices`` supports."""
    return max(n_prices - burn_in - steps, 0)


def rolling_horizons(path: PricePath, cfg: BacktestConfig, strategies=("A+N", "A", "B", "N")) -> CampaignResult:
    """Backtest every admissible start date of an observed price series.

    Starts advance one row at a time; each horizon sees ``burn_in`` rows of
    history and spans ``steps`` rows, with wealth reset to ``w0``.
    """
    if "T" in strategies:
        raise InvalidSpecError("strategy T needs true coefficients, unavailable for observed prices")
    prices = np.asarray(path.prices, dtype=float)
    if prices.ndim != 1:
        raise DataError("rolling_horizons expects a single observed series")
    B, N = cfg.grid.burn_in, cfg.grid.steps
    n = horizon_count(prices.size, B, N)
    if n < 1:
        raise DataError(f"series of {prices.size} prices is too short; need at least {B + N + 1}")
    windows = np.lib.stride_tricks.sliding_window_view(prices, B + N + 1)[:n]
    batch = PricePath(cfg.grid, np.array(windows), meta={"model": "observed-rolling"})
    ledgers, signals = run_strategies(batch, cfg, strategies)
    summary, welch = summarize(ledgers, cfg)
    checks = {s: price_checksum(led.prices) for s, led in ledgers.items()}
    return CampaignResult(ledgers, summary, welch, checks, signals)
