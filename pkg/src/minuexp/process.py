"""Simulation of the mixed Poisson process N(t) = N1(xi * mu(t)).

One mixing value xi is drawn per path; unit-rate exponential spacings are
accumulated and mapped through the inverse time change, so arrival times
are exact (no grid thinning, no discretization bias).  Deterministic time
changes mu(t) are nonnegative, strictly increasing, continuous and vanish
at zero; linear and power variants invert analytically, tabulated ones by
bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import structure
from .structure import MinUExpParams

__all__ = [
    "MuTransform",
    "LinearMu",
    "PowerMu",
    "TableMu",
    "Trajectory",
    "simulate",
    "simulate_paths",
    "simulate_first_arrivals",
    "sample_arrival_times",
    "sample_grid_counts",
    "counts_on_grid",
    "increments_on_grid",
    "interarrivals",
    "thinning_check",
    "ThinningResult",
]


class MuTransform:
    """Deterministic accumulated-intensity function mu(t)."""

    def __call__(self, t):
        raise NotImplementedError

    def inverse(self, m):
        raise NotImplementedError


@dataclass(frozen=True)
class LinearMu(MuTransform):
    """mu(t) = c t."""

    c: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0.0):
            raise ValueError("linear time-change slope c must be positive")

    def __call__(self, t):
        return self.c * np.asarray(t, dtype=float) if np.ndim(t) else self.c * float(t)

    def inverse(self, m):
        return np.asarray(m, dtype=float) / self.c if np.ndim(m) else float(m) / self.c


@dataclass(frozen=True)
class PowerMu(MuTransform):
    """mu(t) = c t^b."""

    c: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0.0):
            raise ValueError("power time-change scale c must be positive")
        if not (math.isfinite(self.b) and self.b > 0.0):
            raise ValueError("power time-change exponent b must be positive")

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        out = self.c * arr**self.b
        return out if arr.ndim else float(out)

    def inverse(self, m):
        arr = np.asarray(m, dtype=float)
        out = (arr / self.c) ** (1.0 / self.b)
        return out if arr.ndim else float(out)


class TableMu(MuTransform):
    """Piecewise-linear mu(t) through knots (t_i, mu_i), starting at (0, 0).

    Defined on [0, t_end] only; the inverse is found by bisection to an
    absolute tolerance of 1e-12 times the final knot time (overridable).
    """

    def __init__(self, knots):
        arr = np.asarray(knots, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
            raise ValueError("table transform needs at least two (t, mu) knot pairs")
        if arr[0, 0] != 0.0 or arr[0, 1] != 0.0:
            raise ValueError("table transform must start at the knot (0, 0)")
        if not (np.all(np.diff(arr[:, 0]) > 0.0) and np.all(np.diff(arr[:, 1]) > 0.0)):
            raise ValueError("table knots must be strictly increasing in both coordinates")
        self.knot_t = arr[:, 0].copy()
        self.knot_mu = arr[:, 1].copy()

    @property
    def t_end(self) -> float:
        return float(self.knot_t[-1])

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 0.0) or np.any(arr > self.knot_t[-1]):
            raise ValueError("time outside the table transform's domain")
        out = np.interp(arr, self.knot_t, self.knot_mu)
        return out if arr.ndim else float(out)

    def _inverse_scalar(self, m: float, tol: float) -> float:
        lo, hi = 0.0, float(self.knot_t[-1])
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if float(np.interp(mid, self.knot_t, self.knot_mu)) < m:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def inverse(self, m, tol: float | None = None):
        arr = np.asarray(m, dtype=float)
        if np.any(arr < 0.0) or np.any(arr > self.knot_mu[-1]):
            raise ValueError("intensity outside the table transform's range")
        if tol is None:
            tol = 1e-12 * float(self.knot_t[-1])
        out = np.array([self._inverse_scalar(float(v), tol) for v in np.atleast_1d(arr)])
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


@dataclass(frozen=True)
class Trajectory:
    """One realized path: mixing value, arrival times, and the horizon."""

    xi: float
    arrivals: np.ndarray = field(repr=False)
    horizon: float

    def __post_init__(self):
        arr = np.asarray(self.arrivals, dtype=float)
        if arr.size and (np.any(np.diff(arr) <= 0.0) or arr[0] <= 0.0 or arr[-1] > self.horizon):
            raise ValueError("arrival times must be strictly increasing in (0, horizon]")
        object.__setattr__(self, "arrivals", arr)


def _check_horizon(mu: MuTransform, horizon: float) -> float:
    if not (math.isfinite(horizon) and horizon > 0.0):
        raise ValueError("horizon must be a finite positive real")
    if isinstance(mu, TableMu) and horizon > mu.t_end:
        raise ValueError("horizon exceeds the table transform's domain")
    return float(mu(horizon))


def _draw_spacings(rng: np.random.Generator, limit: float) -> np.ndarray:
    """Partial sums of unit exponentials up to (and excluding) limit."""
    sums: list[float] = []
    total = 0.0
    block = 8
    while True:
        cs = total + np.cumsum(rng.exponential(size=block))
        over = np.nonzero(cs > limit)[0]
        if over.size:
            sums.extend(cs[: over[0]].tolist())
            return np.asarray(sums, dtype=float)
        sums.extend(cs.tolist())
        total = float(cs[-1])
        block = min(block * 2, 4096)


def simulate(
    params: MinUExpParams, mu: MuTransform, horizon: float, rng: np.random.Generator
) -> Trajectory:
    """One exact path on [0, horizon].

    Draws xi once, accumulates unit exponential spacings S_1 < S_2 < ...
    while S_k <= xi mu(horizon), and sets T_k = mu^-1(S_k / xi).
    """
    mu_h = _check_horizon(mu, horizon)
    xi = structure.sample(params, rng)
    s = _draw_spacings(rng, xi * mu_h)
    arrivals = mu.inverse(s / xi) if s.size else np.empty(0)
    arrivals = np.minimum(np.asarray(arrivals, dtype=float), horizon)
    return Trajectory(xi=xi, arrivals=arrivals, horizon=float(horizon))


def simulate_paths(
    params: MinUExpParams, mu: MuTransform, horizon: float, paths: int, master_seed: int
):
    """Independent paths, path i on its own child stream of master_seed.

    Path contents depend only on (master_seed, i), never on the total path
    count, so parallel workers can split the range freely.
    """
    from .rng import substream

    if paths < 1:
        raise ValueError("number of paths must be a positive integer")
    for i in range(int(paths)):
        yield simulate(params, mu, horizon, substream(master_seed, i))


def simulate_first_arrivals(
    params: MinUExpParams, mu: MuTransform, k: int, rng: np.random.Generator
) -> np.ndarray:
    """Exact times of the first k events, with no horizon truncation."""
    if k < 1 or int(k) != k:
        raise ValueError("number of arrivals k must be a positive integer")
    xi = structure.sample(params, rng)
    s = np.cumsum(rng.exponential(size=int(k)))
    return np.asarray(mu.inverse(s / xi), dtype=float)


def sample_arrival_times(
    params: MinUExpParams, mu: MuTransform, k: int, paths: int, rng: np.random.Generator
) -> np.ndarray:
    """Matrix (paths, k) of first-k arrival times over many paths.

    Block-vectorized over paths on the single stream supplied; one xi and
    one exponential block are drawn per path row.
    """
    if k < 1 or int(k) != k:
        raise ValueError("number of arrivals k must be a positive integer")
    if paths < 1:
        raise ValueError("number of paths must be a positive integer")
    xi = structure.sample(params, rng, size=int(paths))
    s = np.cumsum(rng.exponential(size=(int(paths), int(k))), axis=1)
    return np.asarray(mu.inverse(s / xi[:, None]), dtype=float)


def sample_grid_counts(
    params: MinUExpParams,
    mu: MuTransform,
    times,
    paths: int,
    rng: np.random.Generator,
    chunk_size: int = 100_000,
) -> np.ndarray:
    """Counts N(t_j) for each path, as an integer matrix (paths, len(times)).

    Exact arrival-driven sampling vectorized in chunks on one stream:
    within a chunk, spacing blocks are drawn for all unfinished paths until
    every path's cumulative sum has crossed xi mu(t_max).  Output is
    deterministic for fixed (stream state, paths, chunk_size).
    """
    t_arr = np.asarray(times, dtype=float)
    if t_arr.ndim != 1 or t_arr.size == 0:
        raise ValueError("times must be a nonempty one-dimensional vector")
    if np.any(t_arr <= 0.0) or np.any(np.diff(t_arr) <= 0.0):
        raise ValueError("times must be positive and strictly increasing")
    if paths < 1:
        raise ValueError("number of paths must be a positive integer")
    mu_grid = np.asarray(mu(t_arr), dtype=float)

    out = np.zeros((int(paths), t_arr.size), dtype=np.int64)
    for start in range(0, int(paths), chunk_size):
        stop = min(start + chunk_size, int(paths))
        xi = structure.sample(params, rng, size=stop - start)
        thresholds = xi[:, None] * mu_grid[None, :]
        limits = thresholds[:, -1]
        counts = np.zeros((stop - start, t_arr.size), dtype=np.int64)
        active = np.arange(stop - start)
        totals = np.zeros(stop - start)
        block = 16
        while active.size:
            cs = totals[active, None] + np.cumsum(
                rng.exponential(size=(active.size, block)), axis=1
            )
            counts[active] += (cs[:, :, None] <= thresholds[active, None, :]).sum(axis=1)
            totals[active] = cs[:, -1]
            active = active[cs[:, -1] <= limits[active]]
            block = min(block * 2, 1024)
        out[start:stop] = counts
    return out


def counts_on_grid(traj: Trajectory, times) -> np.ndarray:
    """Counts N(t_j) of one path on an increasing grid within its horizon."""
    t_arr = np.asarray(times, dtype=float)
    if t_arr.ndim != 1 or t_arr.size == 0:
        raise ValueError("times must be a nonempty one-dimensional vector")
    if np.any(t_arr <= 0.0) or np.any(np.diff(t_arr) <= 0.0):
        raise ValueError("times must be positive and strictly increasing")
    if t_arr[-1] > traj.horizon:
        raise ValueError("grid extends beyond the trajectory horizon")
    return np.searchsorted(traj.arrivals, t_arr, side="right").astype(np.int64)


def increments_on_grid(traj: Trajectory, times) -> np.ndarray:
    """Count increments over the grid cells (first cell starts at 0)."""
    return np.diff(counts_on_grid(traj, times), prepend=0)


def interarrivals(traj: Trajectory) -> np.ndarray:
    """Gaps (T_1, T_2 - T_1, ...) between consecutive arrivals."""
    if traj.arrivals.size == 0:
        raise ValueError("trajectory has no arrivals")
    return np.diff(traj.arrivals, prepend=0.0)


@dataclass(frozen=True)
class ThinningResult:
    """Conditional-count tabulation against the binomial reference law."""

    observed: np.ndarray
    expected_pmf: np.ndarray
    n_conditioning: int
    ratio: float
    statistic: float
    dof: int
    p_value: float
    conclusive: bool


def thinning_check(
    params: MinUExpParams,
    mu: MuTransform,
    s: float,
    t: float,
    n: int,
    paths: int,
    rng: np.random.Generator,
) -> ThinningResult:
    """Tabulate N(s) among paths with N(t) = n against Bi(n, mu(s)/mu(t)).

    Runs a chi-square comparison when at least 1000 conditioning paths were
    found; otherwise the result is flagged inconclusive and the test
    statistics are NaN.
    """
    if not 0.0 < s < t:
        raise ValueError("conditioning times must satisfy 0 < s < t")
    if n < 1 or int(n) != n:
        raise ValueError("conditioning count n must be a positive integer")
    from .counting import conditional_binomial_pmf
    from .oracle import chi_square_pmf

    n = int(n)
    counts = sample_grid_counts(params, mu, [s, t], paths, rng)
    mask = counts[:, 1] == n
    n_cond = int(np.sum(mask))
    observed = np.bincount(counts[mask, 0], minlength=n + 1)[: n + 1]
    ratio = float(mu(s)) / float(mu(t))
    expected = np.array([conditional_binomial_pmf(n, ratio, j) for j in range(n + 1)])
    if n_cond < 1000:
        return ThinningResult(
            observed, expected, n_cond, ratio, math.nan, 0, math.nan, False
        )
    stat, dof, p = chi_square_pmf(observed, expected, n_cond)
    return ThinningResult(observed, expected, n_cond, ratio, stat, dof, p, True)
