"""Seeded sample paths of a discounted risky asset.

Two generative models are provided: geometric Brownian motion with constant
or deterministic time-varying coefficients (stepped exactly in logs), and the
Heston-type model in which an exogenous variance factor ``X`` drives both the
excess drift ``a * X`` and the volatility ``sqrt(X)``.

All simulators work on a :class:`TimeGrid` whose points run from
``-burn_in`` to ``steps``; the price at grid index 0 is the start of the
investment horizon. Batches of paths are stored as 2-D arrays with one row
per path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DataError, InvalidSpecError

TRADING_DAYS = 252
VAR_FLOOR = 1e-10


@dataclass(frozen=True)
class TimeGrid:
    """Equally spaced grid ``t_k = k * dt`` for ``k = -burn_in, ..., steps``."""

    horizon: float = 1.0
    steps: int = TRADING_DAYS
    burn_in: int = 0

    def __post_init__(self):
        if self.steps < 1:
            raise InvalidSpecError(f"steps must be >= 1, got {self.steps}")
        if self.burn_in < 0:
            raise InvalidSpecError(f"burn_in must be >= 0, got {self.burn_in}")
        if not self.horizon > 0:
            raise InvalidSpecError(f"horizon must be positive, got {self.horizon}")

    @property
    def dt(self) -> float:
        return self.horizon / self.steps

    @property
    def n_points(self) -> int:
        return self.burn_in + self.steps + 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(-self.burn_in, self.steps + 1) * self.dt

    def pos(self, k: int) -> int:
        """Array position of grid index ``k``."""
        j = k + self.burn_in
        if not 0 <= j < self.n_points:
            raise IndexError(f"grid index {k} outside [-{self.burn_in}, {self.steps}]")
        return j

    @classmethod
    def for_estimation(cls, horizon=1.0, steps=TRADING_DAYS, window=TRADING_DAYS):
        """Grid with enough history for the estimators at every ``t_k``.

        The mirror window at ``t_0`` reaches back ``steps`` points and the
        volatility estimate at its first point needs ``window + 1`` returns.
        """
        return cls(horizon=horizon, steps=steps, burn_in=steps + window + 1)


def _as_fn(value):
    if callable(value):
        return value
    c = float(value)
    return lambda t: np.full(np.shape(t), c, dtype=float)


@dataclass(frozen=True)
class MarketSpec:
    """Generative model of the discounted risky asset plus risk-free rate.

    Use the :meth:`gbm`, :meth:`functional_gbm` and :meth:`heston`
    constructors rather than filling the fields directly.
    """

    kind: str
    r: float = 0.02
    mu: float | Callable | None = None
    sigma: float | Callable | None = None
    a: float | None = None
    iota: float | None = None
    k_level: float | None = None
    v: float | None = None
    kappa: float | None = None
    x0: float | None = None

    def __post_init__(self):
        if self.kind not in ("constant-gbm", "functional-gbm", "heston"):
            raise InvalidSpecError(f"unknown market kind {self.kind!r}")
        if self.kind == "constant-gbm" and not float(self.sigma) > 0:
            raise InvalidSpecError(f"sigma must be positive, got {self.sigma}")
        if self.kind == "heston":
            if not self.x0 > 0:
                raise InvalidSpecError(f"X0 must be positive, got {self.x0}")
            if self.iota < 0 or self.v < 0:
                raise InvalidSpecError("iota and v must be non-negative")
            if not -1.0 <= self.kappa <= 1.0:
                raise InvalidSpecError(f"kappa must lie in [-1, 1], got {self.kappa}")

    @classmethod
    def gbm(cls, mu, sigma, r=0.02):
        return cls("constant-gbm", r=r, mu=float(mu), sigma=float(sigma))

    @classmethod
    def functional_gbm(cls, mu, sigma, r=0.02):
        """GBM with deterministic ``mu(t)`` and ``sigma(t)`` (vectorised callables)."""
        return cls("functional-gbm", r=r, mu=mu, sigma=sigma)

    @classmethod
    def heston(cls, a=8.5, iota=42.5, k_level=0.01, v=0.6, kappa=-0.7, x0=0.02, r=0.02):
        return cls("heston", r=r, a=a, iota=iota, k_level=k_level, v=v, kappa=kappa, x0=x0)

    @property
    def is_gbm(self) -> bool:
        return self.kind != "heston"

    def coefficients(self, t):
        """Return ``(mu(t), sigma(t))`` on the array of times ``t`` (GBM only)."""
        if not self.is_gbm:
            raise InvalidSpecError("Heston coefficients depend on the simulated factor")
        t = np.asarray(t, dtype=float)
        mu = np.broadcast_to(np.asarray(_as_fn(self.mu)(t), dtype=float), t.shape)
        sigma = np.broadcast_to(np.asarray(_as_fn(self.sigma)(t), dtype=float), t.shape)
        return mu, sigma


@dataclass(frozen=True)
class RngSeed:
    master_seed: int
    path_index: int = 0

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence([self.master_seed, self.path_index]))


@dataclass
class PricePath:
    """Discounted prices on a grid, optionally with the true coefficients.

    ``prices`` has shape ``(n_points,)`` for one path or ``(n_paths, n_points)``
    for a batch; ``mu`` and ``sigma`` (when present) have the same shape.
    """

    grid: TimeGrid
    prices: np.ndarray
    mu: np.ndarray | None = None
    sigma: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.prices = np.asarray(self.prices, dtype=float)
        if self.prices.shape[-1] != self.grid.n_points:
            raise DataError(
                f"expected {self.grid.n_points} prices on the grid, got {self.prices.shape[-1]}"
            )
        if not np.all(self.prices > 0):
            bad = int(np.argwhere(~(self.prices > 0))[0][-1])
            raise DataError(f"non-positive price at position {bad}", index=bad)

    @property
    def n_paths(self) -> int:
        return 1 if self.prices.ndim == 1 else self.prices.shape[0]

    @property
    def has_truth(self) -> bool:
        return self.mu is not None and self.sigma is not None

    def path(self, i: int) -> "PricePath":
        """Extract path ``i`` of a batch as a single-path object."""
        if self.prices.ndim == 1:
            if i != 0:
                raise IndexError(i)
            return self
        pick = lambda a: None if a is None else a[i]
        return PricePath(self.grid, self.prices[i], pick(self.mu), pick(self.sigma), dict(self.meta))

    def at(self, k: int):
        return self.prices[..., self.grid.pos(k)]


def _draws(seeds, n_steps, width, normals):
    if normals is not None:
        z = np.asarray(normals, dtype=float)
        return z.reshape(len(seeds), n_steps, width)
    out = np.empty((len(seeds), n_steps, width))
    for i, seed in enumerate(seeds):
        out[i] = seed.generator().standard_normal((n_steps, width))
    return out


def _seed_list(seed, n_paths):
    if isinstance(seed, RngSeed):
        if n_paths is None:
            return [seed], False
        return [RngSeed(seed.master_seed, seed.path_index + i) for i in range(n_paths)], True
    if n_paths is None:
        return [RngSeed(int(seed), 0)], False
    return [RngSeed(int(seed), i) for i in range(n_paths)], True


def simulate_gbm_path(spec, grid, seed=0, n_paths=None, s0=1.0, normals=None):
    """Simulate discounted GBM prices with exact log-normal stepping.

    ``seed`` is either an :class:`RngSeed` or a master seed. With
    ``n_paths`` set, path ``i`` uses the stream ``(master_seed, i)`` and the
    result is a batch. ``normals`` replaces the random draws (shape
    ``(steps_total,)`` or ``(n_paths, steps_total)``).
    """
    if not spec.is_gbm:
        raise InvalidSpecError("simulate_gbm_path needs a GBM market spec")
    t = grid.times
    mu, sigma = spec.coefficients(t)
    if not np.all(sigma > 0):
        raise InvalidSpecError("sigma(t) must be positive on the whole grid")
    seeds, batch = _seed_list(seed, n_paths)
    z = _draws(seeds, grid.n_points - 1, 1, normals)[..., 0]
    dt = grid.dt
    steps = (mu[:-1] - spec.r - 0.5 * sigma[:-1] ** 2) * dt + sigma[:-1] * np.sqrt(dt) * z
    logs = np.concatenate([np.zeros((len(seeds), 1)), np.cumsum(steps, axis=1)], axis=1)
    logs -= logs[:, grid.burn_in : grid.burn_in + 1]
    prices = s0 * np.exp(logs)
    mu_b = np.broadcast_to(mu, prices.shape).copy()
    sigma_b = np.broadcast_to(sigma, prices.shape).copy()
    if not batch:
        prices, mu_b, sigma_b = prices[0], mu_b[0], sigma_b[0]
    return PricePath(grid, prices, mu_b, sigma_b, {"model": spec.kind})


def simulate_heston_path(spec, grid, seed=0, n_paths=None, s0=1.0, normals=None, return_factor=False):
    """Simulate the Heston-type market with full-truncation Euler stepping.

    The factor starts at ``x0`` on the first grid point (start of burn-in).
    ``log S`` takes the Euler step with the truncated factor frozen over the
    step, which keeps prices positive. Truth fields carry
    ``mu = a * max(X, 0) + r`` and ``sigma = sqrt(max(X, VAR_FLOOR))``.
    """
    if spec.kind != "heston":
        raise InvalidSpecError("simulate_heston_path needs a Heston market spec")
    seeds, batch = _seed_list(seed, n_paths)
    n_steps = grid.n_points - 1
    z = _draws(seeds, n_steps, 2, normals)
    dt, sdt = grid.dt, np.sqrt(grid.dt)
    a, iota, kl, v, kappa = spec.a, spec.iota, spec.k_level, spec.v, spec.kappa
    rho_c = np.sqrt(1.0 - kappa**2)

    n = len(seeds)
    x = np.empty((n, grid.n_points))
    logs = np.empty((n, grid.n_points))
    x[:, 0] = spec.x0
    logs[:, 0] = 0.0
    for j in range(n_steps):
        xp = np.maximum(x[:, j], 0.0)
        sq = np.sqrt(xp)
        z1, z2 = z[:, j, 0], z[:, j, 1]
        logs[:, j + 1] = logs[:, j] + (a * xp - 0.5 * xp) * dt + sq * sdt * z1
        x[:, j + 1] = x[:, j] + iota * (kl - xp) * dt + v * sq * sdt * (kappa * z1 + rho_c * z2)
    logs -= logs[:, grid.burn_in : grid.burn_in + 1]
    prices = s0 * np.exp(logs)
    mu = a * np.maximum(x, 0.0) + spec.r
    sigma = np.sqrt(np.maximum(x, VAR_FLOOR))
    if not batch:
        prices, mu, sigma, x = prices[0], mu[0], sigma[0], x[0]
    path = PricePath(grid, prices, mu, sigma, {"model": "heston"})
    return (path, x) if return_factor else path


def simulate(spec, grid, seed=0, n_paths=None, s0=1.0):
    """Dispatch to the simulator matching ``spec.kind``."""
    if spec.is_gbm:
        return simulate_gbm_path(spec, grid, seed, n_paths, s0)
    return simulate_heston_path(spec, grid, seed, n_paths, s0)


def discount_prices(raw: Sequence[float], r: float, grid: TimeGrid | None = None, dt=1.0 / TRADING_DAYS):
    """Deflate raw prices by ``exp(-r t)`` with ``t`` measured from the first row.

    Without ``grid`` the series becomes a horizon-free grid of ``len(raw) - 1``
    steps of length ``dt``.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 1 or raw.size < 2:
        raise DataError("raw prices must be a 1-D series of at least two values")
    bad = np.flatnonzero(~(raw > 0))
    if bad.size:
        raise DataError(f"non-positive raw price {raw[bad[0]]} at index {bad[0]}", index=int(bad[0]))
    if grid is None:
        grid = TimeGrid(horizon=(raw.size - 1) * dt, steps=raw.size - 1, burn_in=0)
    if raw.size != grid.n_points:
        raise DataError(f"expected {grid.n_points} prices, got {raw.size}")
    t = np.arange(raw.size) * grid.dt
    return PricePath(grid, raw * np.exp(-r * t), meta={"model": "observed", "r": r})
