"""Evaluation criteria over terminal returns and wealth ledgers.

Variances and standard deviations use the population (``1/n``) convention.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from .errors import DataError, InsufficientSampleError, UndefinedRatioError


def _returns(sample):
    x = np.asarray(sample, dtype=float).ravel()
    if x.size < 2:
        raise InsufficientSampleError(f"need at least 2 returns, got {x.size}")
    return x


def simple_returns(terminal_wealth, w0=1.0):
    return (np.asarray(terminal_wealth, dtype=float) - w0) / w0


def ceq(returns, gamma=1.4) -> float:
    """Certainty-equivalent return: ``mean - gamma * var``."""
    x = _returns(returns)
    return float(x.mean() - gamma * x.var())


def sharpe(returns, r=0.02) -> float:
    """``(mean - r) / std``; raises :class:`UndefinedRatioError` for zero spread."""
    x = _returns(returns)
    sd = x.std()
    if not sd > 0:
        raise UndefinedRatioError("returns have zero standard deviation")
    return float((x.mean() - r) / sd)


def turnover(ledger):
    """Per-path turnover of a wealth ledger.

    At each rebalance ``t_i`` (``i = 1..N``) the holding carried from
    ``t_{i-1}`` has drifted to ``theta_{i-1} * S_i / S_{i-1}``; the trade is its
    difference from the new position ``theta_i``, expressed as a fraction of
    ``W_i``.
    """
    theta, W, S = ledger.theta, ledger.wealth, ledger.prices
    drifted = theta[..., :-1] * (S[..., 1:] / S[..., :-1])
    Wi = W[..., 1:]
    if np.any(Wi == 0):
        raise DataError("zero wealth makes the risky weight undefined")
    return np.sum(np.abs(drifted - theta[..., 1:]) / np.abs(Wi), axis=-1)


def welch_test(x, y):
    """Two-sided Welch unequal-variance t-test; returns ``(t, p)``."""
    x = _returns(x)
    y = _returns(y)
    if not (x.var() > 0 and y.var() > 0):
        raise UndefinedRatioError("both samples need positive variance")
    res = stats.ttest_ind(x, y, equal_var=False)
    return float(res.statistic), float(res.pvalue)
