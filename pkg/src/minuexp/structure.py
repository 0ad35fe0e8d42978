"""The Min-U-Exp structure distribution: the law of min(U(0, a), Exp(lambda)).

This is the mixing variable of the whole package.  Its c.d.f. is

    F(x) = 0                                   x <= 0
    F(x) = 1 - e^(-lambda x) + (x/a) e^(-lambda x)   0 < x <= a
    F(x) = 1                                   x > a

Evaluators accept scalars or numpy arrays in the variate argument and are
pure; sampling mutates only the generator passed in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gamma_kernel import lower_incomplete_gamma

__all__ = [
    "MinUExpParams",
    "cdf",
    "pdf",
    "hazard",
    "scale",
    "raw_moment",
    "variance",
    "lst",
    "sample",
]


@dataclass(frozen=True)
class MinUExpParams:
    """Parameter pair of the Min-U-Exp law.

    a is the right end of the uniform support (same units as the variate),
    lam the exponential rate (inverse units).  Both must be positive.
    """

    a: float
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise ValueError("parameter a must be a finite positive real")
        if not (math.isfinite(self.lam) and self.lam > 0.0):
            raise ValueError("parameter lambda must be a finite positive real")


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def cdf(params: MinUExpParams, x):
    """Distribution function; total on the reals, right-continuous."""
    a, lam = params.a, params.lam
    arr, scalar = _as_array(x)
    inside = (arr > 0.0) & (arr <= a)
    xi = np.where(inside, arr, 0.5 * a)
    body = 1.0 - np.exp(-lam * xi) + (xi / a) * np.exp(-lam * xi)
    out = np.where(arr <= 0.0, 0.0, np.where(arr > a, 1.0, body))
    return float(out) if scalar else out


def pdf(params: MinUExpParams, x):
    """Density (e^(-lambda x)/a)(lambda a + 1 - lambda x) on (0, a), else 0."""
    a, lam = params.a, params.lam
    arr, scalar = _as_array(x)
    inside = (arr > 0.0) & (arr < a)
    xi = np.where(inside, arr, 0.5 * a)
    body = np.exp(-lam * xi) / a * (lam * a + 1.0 - xi * lam)
    out = np.where(inside, body, 0.0)
    return float(out) if scalar else out


def hazard(params: MinUExpParams, x):
    """Hazard rate lambda + 1/(a - x) on (0, a); +inf at a; 0 elsewhere.

    The boundary value at x = a is the one-sided limit, reported as an
    explicit infinity so plots can carry the right endpoint.
    """
    a, lam = params.a, params.lam
    arr, scalar = _as_array(x)
    inside = (arr > 0.0) & (arr < a)
    xi = np.where(inside, arr, 0.5 * a)
    body = lam + 1.0 / (a - xi)
    out = np.where(inside, body, 0.0)
    out = np.where(arr == a, np.inf, out)
    return float(out) if scalar else out


def scale(params: MinUExpParams, k: float) -> MinUExpParams:
    """Parameters of k*xi: (k a, lambda/k).  Requires k > 0."""
    if not (math.isfinite(k) and k > 0.0):
        raise ValueError("scaling constant k must be a finite positive real")
    return MinUExpParams(k * params.a, params.lam / k)


def raw_moment(params: MinUExpParams, k: int) -> float:
    """k-th raw moment E(xi^k) for integer k >= 1.

    E(xi^k) = (k / lambda^k) (gamma(k, a lambda) - gamma(k+1, a lambda)/(a lambda))
    """
    if k < 1 or int(k) != k:
        raise ValueError("moment order k must be a positive integer")
    k = int(k)
    a, lam = params.a, params.lam
    z = a * lam
    gk = lower_incomplete_gamma(k, z)
    gk1 = lower_incomplete_gamma(k + 1, z)
    return k / lam**k * (gk - gk1 / z)


def variance(params: MinUExpParams) -> float:
    """Variance of xi in closed form."""
    a, lam = params.a, params.lam
    z = a * lam
    e = math.exp(-z)
    return (2.0 + 2.0 * e - ((z + 1.0 - e) / z) ** 2) / lam**2


def lst(params: MinUExpParams, t):
    """Laplace-Stieltjes transform E e^(-t xi) for t >= 0."""
    a, lam = params.a, params.lam
    arr, scalar = _as_array(t)
    if np.any(arr < 0.0) or np.any(np.isnan(arr)):
        raise ValueError("transform argument t must be nonnegative")
    c = lam + arr
    out = lam / c + arr / (a * c**2) * (-np.expm1(-c * a))
    return float(out) if scalar else out


def sample(params: MinUExpParams, rng: np.random.Generator, size=None):
    """Exact draws of min(u, e), u ~ U(0, a) and e ~ Exp(lambda) independent.

    One uniform and one exponential are consumed per draw, uniform first.
    Returns a float for size=None, else an array of the requested shape.
    """
    u = rng.uniform(0.0, params.a, size=size)
    e = rng.exponential(scale=1.0 / params.lam, size=size)
    out = np.minimum(u, e)
    return float(out) if size is None else out


def _quantile(params: MinUExpParams, q: float) -> float:
    """Numeric inverse of the c.d.f. by bracketed root finding (internal)."""
    from scipy.optimize import brentq

    if not 0.0 < q < 1.0:
        raise ValueError("quantile level must lie in (0, 1)")
    return brentq(lambda x: cdf(params, x) - q, 0.0, params.a, xtol=1e-15)
