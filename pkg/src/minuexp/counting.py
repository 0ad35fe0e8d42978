"""Count laws of the mixed Poisson family with Min-U-Exp mixing.

The one-dimensional count p.m.f., its generating function and moments, the
joint p.m.f.s of counts along an increasing intensity grid (cumulative and
incremental forms), the posterior of the mixing variable given a count,
and the binomial law of a past count given a later one.

All p.m.f. evaluation runs in log space: a^n / n! and gamma(n+1, .) leave
double range near n ~ 150 in direct form.
"""

from __future__ import annotations

import math

import numpy as np

from ._mixture import log_mixing_kernel
from .gamma_kernel import lower_incomplete_gamma
from .structure import MinUExpParams, lst, variance

__all__ = [
    "count_pmf",
    "scaled_count_params",
    "pgf",
    "count_mean_var",
    "factorial_moment",
    "ordered_pmf",
    "increments_pmf",
    "ordered_to_increments",
    "increments_to_ordered",
    "xi_given_count_pdf",
    "mean_xi_given_count",
    "conditional_binomial_pmf",
]


def _validate_counts(values, name: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty one-dimensional vector")
    if not np.issubdtype(arr.dtype, np.integer):
        if np.any(arr != np.floor(arr)):
            raise ValueError(f"{name} must contain integers")
        arr = arr.astype(np.int64)
    return arr


def _validate_grid(mu) -> np.ndarray:
    grid = np.asarray(mu, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("intensity grid must be a nonempty one-dimensional vector")
    if not (np.all(grid > 0.0) and np.all(np.diff(grid) > 0.0)):
        raise ValueError("intensity grid must be positive and strictly increasing")
    return grid


def count_pmf(params: MinUExpParams, n):
    """P(N = n) of the unit-intensity count law, with c = lambda + 1:

    (1/n!) { gamma(n+1, ac) (lambda a c + 1 - n lambda) / (a c^(n+2))
             + lambda a^n e^(-ac) / c }

    Vectorized over n; raises for negative n.
    """
    n_arr = np.asarray(n)
    scalar = n_arr.ndim == 0
    counts = _validate_counts(np.atleast_1d(n_arr), "count index n")
    if np.any(counts < 0):
        raise ValueError("count index n must be nonnegative")
    log_pmf = log_mixing_kernel(params, counts, params.lam + 1.0) - np.array(
        [math.lgamma(k + 1.0) for k in counts]
    )
    out = np.exp(log_pmf)
    return float(out[0]) if scalar else out


def scaled_count_params(params: MinUExpParams, mu_t: float) -> MinUExpParams:
    """Count-law parameters at accumulated intensity mu_t: (a mu_t, lambda/mu_t)."""
    if not (math.isfinite(mu_t) and mu_t > 0.0):
        raise ValueError("accumulated intensity mu_t must be positive")
    return MinUExpParams(params.a * mu_t, params.lam / mu_t)


def pgf(params: MinUExpParams, mu_t: float, z):
    """Probability generating function E z^N(t) for |z| <= 1.

    Equals the mixing variable's Laplace-Stieltjes transform at
    mu_t (1 - z); in particular pgf(1) = 1 and pgf(0) = P(N(t) = 0).
    """
    if not (math.isfinite(mu_t) and mu_t > 0.0):
        raise ValueError("accumulated intensity mu_t must be positive")
    z_arr = np.asarray(z, dtype=float)
    if np.any(np.abs(z_arr) > 1.0) or np.any(np.isnan(z_arr)):
        raise ValueError("generating-function argument z must satisfy |z| <= 1")
    return lst(params, mu_t * (1.0 - z_arr) if z_arr.ndim else mu_t * (1.0 - float(z_arr)))


def count_mean_var(params: MinUExpParams, mu_t: float) -> tuple[float, float]:
    """Mean and variance of N(t) at accumulated intensity mu_t.

    mean = (mu/lambda)(1 - 1/(a lambda) + e^(-lambda a)/(a lambda)),
    var  = mean + mu^2 Var(xi).  The law is over-dispersed: var > mean.
    """
    if not (math.isfinite(mu_t) and mu_t > 0.0):
        raise ValueError("accumulated intensity mu_t must be positive")
    a, lam = params.a, params.lam
    z = a * lam
    mean = mu_t / lam * (1.0 - 1.0 / z + math.exp(-z) / z)
    return mean, mean + mu_t**2 * variance(params)


def factorial_moment(params: MinUExpParams, mu_t: float, k: int) -> float:
    """k-th factorial moment E[N(N-1)...(N-k+1)] at intensity mu_t:

    k mu^k / lambda^k (gamma(k, a lambda) - gamma(k+1, a lambda)/(a lambda))
    """
    if not (math.isfinite(mu_t) and mu_t > 0.0):
        raise ValueError("accumulated intensity mu_t must be positive")
    if k < 1 or int(k) != k:
        raise ValueError("factorial-moment order k must be a positive integer")
    k = int(k)
    a, lam = params.a, params.lam
    z = a * lam
    return (
        k
        * mu_t**k
        / lam**k
        * (lower_incomplete_gamma(k, z) - lower_incomplete_gamma(k + 1, z) / z)
    )


def _log_bracket(params: MinUExpParams, k_last: int, mu_last: float) -> float:
    """log of the shared mixing bracket evaluated at the grid endpoint."""
    return log_mixing_kernel(params, k_last, params.lam + mu_last)


def ordered_pmf(params: MinUExpParams, mu, k) -> float:
    """Joint p.m.f. of cumulative counts along the grid mu_1 < ... < mu_n.

    Product of Poisson-increment factors
    mu_1^k1 (mu_2-mu_1)^(k2-k1) ... / (k1! (k2-k1)! ...) times the mixing
    bracket at (k_n, mu_n); the bracket's tail term carries a^(k_n), which
    is what consistency with the mixture integral forces (the variant with
    a single power of a agrees only at a = 1).  Non-monotone or negative
    count vectors are outside the support and return 0.
    """
    grid = _validate_grid(mu)
    counts = _validate_counts(k, "count vector k")
    if counts.size != grid.size:
        raise ValueError("count vector and intensity grid must have matching length")
    steps = np.diff(counts, prepend=0)
    if np.any(steps < 0):
        return 0.0
    widths = np.diff(grid, prepend=0.0)
    log_product = float(
        np.sum(steps * np.log(widths) - np.array([math.lgamma(s + 1.0) for s in steps]))
    )
    return math.exp(log_product + _log_bracket(params, int(counts[-1]), float(grid[-1])))


def increments_pmf(params: MinUExpParams, mu, m) -> float:
    """Joint p.m.f. of count increments over the grid cells.

    Product of mu_1^m1 (mu_2-mu_1)^m2 ... / (m1! m2! ...) times the mixing
    bracket at (m1+...+mn, mu_n).  Identical to the cumulative form after a
    cumulative-sum reparameterization.  Negative entries return 0.
    """
    grid = _validate_grid(mu)
    incs = _validate_counts(m, "increment vector m")
    if incs.size != grid.size:
        raise ValueError("increment vector and intensity grid must have matching length")
    if np.any(incs < 0):
        return 0.0
    widths = np.diff(grid, prepend=0.0)
    log_product = float(
        np.sum(incs * np.log(widths) - np.array([math.lgamma(s + 1.0) for s in incs]))
    )
    return math.exp(log_product + _log_bracket(params, int(np.sum(incs)), float(grid[-1])))


def ordered_to_increments(k):
    """First differences (k1, k2-k1, ...); raises if k is not nondecreasing."""
    counts = _validate_counts(k, "count vector k")
    steps = np.diff(counts, prepend=0)
    if np.any(steps < 0):
        raise ValueError("cumulative count vector must be nondecreasing and nonnegative")
    return steps


def increments_to_ordered(m):
    """Cumulative sums; raises on negative entries.  Inverse of the above."""
    incs = _validate_counts(m, "increment vector m")
    if np.any(incs < 0):
        raise ValueError("increment vector must be componentwise nonnegative")
    return np.cumsum(incs)


def xi_given_count_pdf(params: MinUExpParams, mu_t: float, n: int, x):
    """Posterior density of xi given N(t) = n, supported on (0, a]:

    x^n e^(-x(lambda+mu)) (lambda a + 1 - lambda x) / (a J)

    where a J is the normalizing mixture integral at (n, lambda+mu).
    """
    if not (math.isfinite(mu_t) and mu_t > 0.0):
        raise ValueError("accumulated intensity mu_t must be positive")
    if n < 0 or int(n) != n:
        raise ValueError("count n must be a nonnegative integer")
    n = int(n)
    a, lam = params.a, params.lam
    c = lam + mu_t
    log_norm = math.log(a) + log_mixing_kernel(params, n, c)
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    inside = (arr > 0.0) & (arr <= a)
    xs = np.where(inside, arr, 0.5 * a)
    log_num = -xs * c + np.log(lam * a + 1.0 - lam * xs)
    if n > 0:
        log_num = log_num + n * np.log(xs)
    out = np.where(inside, np.exp(log_num - log_norm), 0.0)
    return float(out[0]) if scalar else out


def mean_xi_given_count(params: MinUExpParams, mu_t: float, n: int) -> float:
    """Posterior mean E(xi | N(t) = n), always in (0, a).

    Ratio of the mixture integrals at orders n+1 and n; the coefficient in
    the expanded numerator is (n+1) lambda, linear in n (the quadratic
    variant overshoots the prior mean at n = 0 and fails the oracle).
    """
    if not (math.isfinite(mu_t) and mu_t > 0.0):
        raise ValueError("accumulated intensity mu_t must be positive")
    if n < 0 or int(n) != n:
        raise ValueError("count n must be a nonnegative integer")
    n = int(n)
    c = params.lam + mu_t
    return math.exp(
        log_mixing_kernel(params, n + 1, c) - log_mixing_kernel(params, n, c)
    )


def conditional_binomial_pmf(n: int, ratio: float, j: int) -> float:
    """Binomial p.m.f. Bi(n, ratio) at j: the law of an earlier count given
    a later count n, with ratio the accumulated-intensity quotient."""
    if n < 0 or int(n) != n:
        raise ValueError("total count n must be a nonnegative integer")
    if j < 0 or int(j) != j or j > n:
        raise ValueError("count j must be an integer with 0 <= j <= n")
    if not 0.0 < ratio < 1.0:
        raise ValueError("intensity ratio must lie strictly inside (0, 1)")
    n, j = int(n), int(j)
    return math.comb(n, j) * ratio**j * (1.0 - ratio) ** (n - j)
