"""Windowed MLE of drift/volatility and quadratic-variation profitability estimates.

The average profitability ``K(0, T)`` is read off the squared increments of
an auxiliary wealth process that holds ``(mu_hat - r) / sigma_hat**2`` in the
risky asset at every step. At time ``t_k`` the realised part over
``[t_0, t_k)`` is combined with an equally long trailing window that stands
in for the unobserved remainder ``[t_k, T)``. The current profitability is
approximated by the same number.

Single-time functions (:func:`mle_estimate`, :func:`estimate_AP`) operate on
one path; the ``rolling_*`` / ``*_trajectory`` functions evaluate every grid
time at once and accept batches (leading axes are paths).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WindowError
from .market_models import PricePath, TimeGrid

SIGMA_FLOOR = 1e-4


@dataclass(frozen=True)
class EstimationWindow:
    """``M + 1`` log-returns ending at the estimation time, each of length ``dt``."""

    M: int = 252
    dt: float = 1.0 / 252

    def __post_init__(self):
        if self.M < 1:
            raise WindowError(f"window M must be >= 1, got {self.M}")

    @property
    def n_returns(self) -> int:
        return self.M + 1


@dataclass(frozen=True)
class ParamEstimate:
    at_time: float
    alpha_hat: float
    beta_hat: float
    mu_hat: float
    sigma_hat: float
    degenerate: bool = False


@dataclass
class AuxWealthSeries:
    times: np.ndarray
    theta: np.ndarray
    wealth: np.ndarray
    increments: np.ndarray
    clamped: np.ndarray


def _log_returns(prices):
    return np.diff(np.log(np.asarray(prices, dtype=float)), axis=-1)


def mle_estimate(path: PricePath, k: int, window: EstimationWindow, r: float) -> ParamEstimate:
    """MLE of ``(mu, sigma)`` at grid index ``k`` of a single path.

    Uses the ``M + 1`` log-returns ``ln(S_{i+1}/S_i)`` for
    ``i = k-1-M, ..., k-1``, normalised by ``M + 1``.
    """
    if path.prices.ndim != 1:
        raise ValueError("mle_estimate works on a single path; use rolling_mle for batches")
    j = path.grid.pos(k)
    first = j - 1 - window.M
    if first < 0:
        raise WindowError(
            f"window of {window.n_returns} returns at t_{k} needs {-first} more history points",
            index=k,
        )
    lr = _log_returns(path.prices[first : j + 1])
    dt = window.dt
    alpha = lr.mean() / dt
    beta = np.mean((lr - alpha * dt) ** 2) / dt
    degenerate = bool(np.ptp(lr) == 0.0)
    if degenerate:
        beta = 0.0
    return ParamEstimate(
        at_time=k * path.grid.dt,
        alpha_hat=float(alpha),
        beta_hat=float(beta),
        mu_hat=float(alpha + r + beta / 2),
        sigma_hat=float(np.sqrt(beta)),
        degenerate=degenerate,
    )


def rolling_mle(prices, M: int, dt: float, r: float):
    """Evaluate the windowed MLE at every array position.

    Returns ``(mu_hat, sigma_hat)`` with the shape of ``prices``; positions
    without ``M + 1`` preceding returns are NaN.
    """
    lr = _log_returns(prices)
    m = M + 1
    shape = np.shape(prices)
    mu = np.full(shape, np.nan)
    sigma = np.full(shape, np.nan)
    if lr.shape[-1] < m:
        return mu, sigma
    # shifting by the first return keeps the running sums well conditioned
    d = lr - lr[..., :1]
    zero = np.zeros(lr.shape[:-1] + (1,))
    s1 = np.concatenate([zero, np.cumsum(d, axis=-1)], axis=-1)
    s2 = np.concatenate([zero, np.cumsum(d * d, axis=-1)], axis=-1)
    w1 = s1[..., m:] - s1[..., :-m]
    w2 = s2[..., m:] - s2[..., :-m]
    mean_d = w1 / m
    var = np.maximum(w2 / m - mean_d**2, 0.0)
    alpha = (mean_d + lr[..., :1]) / dt
    beta = var / dt
    mu[..., m:] = alpha + r + beta / 2
    sigma[..., m:] = np.sqrt(beta)
    return mu, sigma


def floor_sigma(sigma, floor=SIGMA_FLOOR):
    """Clamp volatility estimates at ``floor``; returns ``(sigma, clamped)``."""
    sigma = np.asarray(sigma, dtype=float)
    clamped = sigma < floor
    return np.where(clamped, floor, sigma), clamped


def aux_position(mu_hat, sigma_hat, r: float, floor=SIGMA_FLOOR):
    """Time-consistent position ``(mu_hat - r) / sigma_hat**2``.

    Volatilities below ``floor`` are replaced by ``floor``; the second
    return value marks where that happened.
    """
    s, clamped = floor_sigma(sigma_hat, floor)
    theta = (np.asarray(mu_hat, dtype=float) - r) / s**2
    if np.ndim(theta) == 0:
        return float(theta), bool(clamped)
    return theta, clamped


def aux_increments(prices, theta):
    """``theta_i * (S_{i+1} - S_i) / S_i`` for every step of the series."""
    prices = np.asarray(prices, dtype=float)
    theta = np.asarray(theta, dtype=float)
    ratio = np.diff(prices, axis=-1) / prices[..., :-1]
    return theta[..., : ratio.shape[-1]] * ratio


def quadratic_variation(increments) -> float:
    """Sum of squared increments (0 for an empty series)."""
    inc = np.asarray(increments, dtype=float)
    return float(np.sum(inc * inc))


def _theta_series(path, window, r, truth, floor):
    if truth:
        if not path.has_truth:
            raise ValueError("truth-fed auxiliary wealth needs a simulated path with truth fields")
        return aux_position(path.mu, path.sigma, r, floor)
    mu, sigma = rolling_mle(path.prices, window.M, window.dt, r)
    return aux_position(mu, sigma, r, floor)


def build_aux_wealth(path: PricePath, window: EstimationWindow, r: float, start: int, stop: int,
                     truth=False, floor=SIGMA_FLOOR, w0=0.0) -> AuxWealthSeries:
    """Auxiliary wealth over grid indices ``[start, stop]``.

    Positions are re-estimated at each ``t_i`` with ``i`` in ``[start, stop)``
    (or taken from the path's true coefficients when ``truth`` is set) and
    the wealth is rolled forward with the self-financing update.
    """
    g = path.grid
    a, b = g.pos(start), g.pos(stop)
    if b < a:
        raise ValueError("stop must not precede start")
    theta, clamped = _theta_series(path, window, r, truth, floor)
    th = theta[..., a:b]
    if np.any(np.isnan(th)):
        bad = int(np.flatnonzero(np.isnan(np.atleast_2d(th)).any(axis=0))[0]) + start
        raise WindowError(f"no estimation window available at t_{bad}", index=bad)
    inc = aux_increments(path.prices[..., a : b + 1], th)
    wealth = w0 + np.concatenate([np.zeros(inc.shape[:-1] + (1,)), np.cumsum(inc, axis=-1)], axis=-1)
    return AuxWealthSeries(
        times=g.times[a : b + 1],
        theta=th,
        wealth=wealth,
        increments=inc,
        clamped=clamped[..., a:b],
    )


def ap_trajectory(path: PricePath, window: EstimationWindow, r: float, truth=False, floor=SIGMA_FLOOR):
    """AP estimate ``K_hat(0, T)`` at every ``t_k``, ``k = 0..N-1``.

    Result has shape ``(..., N)``. Raises :class:`WindowError` when the
    mirror window at ``t_0`` runs past the available history.
    """
    g = path.grid
    N, B = g.steps, g.burn_in
    theta, _ = _theta_series(path, window, r, truth, floor)
    inc = aux_increments(path.prices, theta)
    # earliest increment used is the mirror window start at k = 0
    first = B - N
    if first < 0 or np.any(np.isnan(inc[..., first : B + N])):
        raise WindowError(
            f"mirror window at t_0 needs increments from t_{-N}; burn-in of {B} points is too short",
            index=0,
        )
    sq = np.where(np.isnan(inc), 0.0, inc * inc)
    c = np.concatenate([np.zeros(sq.shape[:-1] + (1,)), np.cumsum(sq, axis=-1)], axis=-1)
    k = np.arange(N)
    p = B + k
    realised = c[..., p] - c[..., B : B + 1]
    mirror = c[..., p] - c[..., p - (N - k)]
    return (realised + mirror) / g.horizon


def estimate_AP(path: PricePath, k: int, window: EstimationWindow, r: float, truth=False,
                floor=SIGMA_FLOOR) -> float:
    """AP estimate at grid index ``k`` of a single path.

    Sums the squared auxiliary-wealth increments over ``[t_0, t_k)`` and over
    the mirror window ``[t_{k-(N-k)}, t_k)``, divided by ``T``.
    """
    g = path.grid
    N = g.steps
    if not 0 <= k <= N:
        raise IndexError(f"k must lie in [0, {N}]")
    lo = k - (N - k)
    if lo < -g.burn_in:
        raise WindowError(f"mirror window at t_{k} starts at t_{lo}, before the available history",
                          index=k)
    series = build_aux_wealth(path, window, r, min(lo, 0), k, truth=truth, floor=floor)
    inc = series.increments
    off = -min(lo, 0)
    realised = quadratic_variation(inc[off : off + k])
    mirror = quadratic_variation(inc[lo + off : lo + off + (N - k)]) if lo < k else 0.0
    return (realised + mirror) / g.horizon


def estimate_CP(K_hat):
    """CP estimate at ``t_k``: the current AP estimate itself."""
    K = np.asarray(K_hat, dtype=float)
    if np.any(K < 0):
        raise ValueError("AP estimate must be non-negative")
    return K_hat


def premium_sign(mu_hat, r: float):
    """+1 where ``mu_hat >= r`` and -1 otherwise."""
    return np.where(np.asarray(mu_hat) >= r, 1.0, -1.0)


def premium_error_reduced(mu, sigma, mu_hat, sigma_hat, r):
    """Check the error-reduction inequality of the variance-scaled premium.

    Compares ``|p_hat**2 * sigma**2/sigma_hat**2 - p**2|`` with
    ``|p_hat**2 - p**2|`` where ``p = (mu - r)/sigma``. Returns ``None`` when
    the hypotheses ``sigma**2 < sigma_hat**2`` and ``2 p**2 < p_hat**2`` do not
    hold, otherwise whether the scaled error is strictly smaller.
    """
    p2 = ((mu - r) / sigma) ** 2
    ph2 = ((mu_hat - r) / sigma_hat) ** 2
    if not (sigma**2 < sigma_hat**2 and 2 * p2 < ph2):
        return None
    scaled = ph2 * sigma**2 / sigma_hat**2
    return bool(abs(scaled - p2) < abs(ph2 - p2))
