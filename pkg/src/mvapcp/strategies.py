"""Closed-form position rules.

Every rule returns the discounted amount held in the risky asset. Inputs may
be scalars or arrays of matching shape (one entry per path).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError
from .estimators import SIGMA_FLOOR, floor_sigma

STRATEGIES = ("A", "B", "N", "T", "A+N")


@dataclass(frozen=True)
class RiskPreferences:
    gamma: float = 1.4
    r: float = 0.02

    def __post_init__(self):
        if not self.gamma > 0:
            raise InvalidSpecError(f"gamma must be positive, got {self.gamma}")


@dataclass(frozen=True)
class PortfolioState:
    wealth: float
    w0: float = 1.0
    k: int = 0

    def __post_init__(self):
        if not self.w0 > 0:
            raise InvalidSpecError(f"initial wealth must be positive, got {self.w0}")


@dataclass(frozen=True)
class StrategyKind:
    tag: str
    sigma_threshold: float = 0.1

    def __post_init__(self):
        if self.tag not in STRATEGIES:
            raise InvalidSpecError(f"unknown strategy {self.tag!r}; choose from {STRATEGIES}")
        if not self.sigma_threshold > 0:
            raise InvalidSpecError("sigma_threshold must be positive")


def _scale(wealth, w0, K, T, gamma):
    with np.errstate(over="ignore"):
        return -np.asarray(wealth, dtype=float) + w0 + np.exp(np.asarray(K, dtype=float) * T) / (2 * gamma)


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def theta_precommit(wealth, w0, K_hat, A_hat, sigma, sign, prefs: RiskPreferences, T=1.0,
                    floor=SIGMA_FLOOR):
    """Pre-commitment position written in terms of AP and CP.

    ``(-w + w0 + exp(K*T) / (2 gamma)) * sign * sqrt(A) / sigma`` with
    ``sigma`` clamped at ``floor``.
    """
    if np.any(np.asarray(K_hat) < 0) or np.any(np.asarray(A_hat) < 0):
        raise ValueError("profitability estimates must be non-negative")
    s, _ = floor_sigma(sigma, floor)
    theta = _scale(wealth, w0, K_hat, T, prefs.gamma) * sign * np.sqrt(A_hat) / s
    return _out(theta)


def theta_strategy_B(wealth, w0, mu_hat, sigma_hat, prefs: RiskPreferences, T=1.0, floor=SIGMA_FLOOR):
    """Constant-coefficient optimum with the current MLE plugged in."""
    s, _ = floor_sigma(sigma_hat, floor)
    excess = np.asarray(mu_hat, dtype=float) - prefs.r
    theta = _scale(wealth, w0, (excess / s) ** 2, T, prefs.gamma) * excess / s**2
    return _out(theta)


def theta_true(wealth, w0, K_true, mu, sigma, prefs: RiskPreferences, T=1.0, floor=SIGMA_FLOOR):
    """Pre-commitment position using the true coefficients at ``t`` and the true AP."""
    s, _ = floor_sigma(sigma, floor)
    excess = np.asarray(mu, dtype=float) - prefs.r
    return _out(_scale(wealth, w0, K_true, T, prefs.gamma) * excess / s**2)


def theta_buy_and_hold(wealth):
    return _out(np.asarray(wealth, dtype=float))


def theta_combined(sigma_hat, theta_A, theta_N, threshold=0.1):
    """``theta_A`` while ``sigma_hat < threshold``, ``theta_N`` otherwise."""
    return _out(np.where(np.asarray(sigma_hat) < threshold, theta_A, theta_N))


def true_ap(mu, sigma, r, dt, T=None):
    """Trapezoid average of the squared true premium over the supplied grid."""
    a = ((np.asarray(mu, dtype=float) - r) / np.asarray(sigma, dtype=float)) ** 2
    n = a.shape[-1] - 1
    T = n * dt if T is None else T
    return np.trapezoid(a, dx=dt, axis=-1) / T
