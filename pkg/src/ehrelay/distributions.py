"""Special functions, densities and samplers for the fading aggregates.

Two families appear in the model:

* the aggregate PU power at a node, a sum of ``N`` i.i.d. exponentials
  (Erlang with integer shape), and
* the strongest of ``M`` interference links, the maximum of ``M`` i.i.d.
  exponentials.

Everything here is vectorised over numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

_SQRT_PI = math.sqrt(math.pi)
_ERF_SPLIT = 1.5
_ERF_SERIES_TERMS = 40
_ERFC_CF_DEPTH = 100
_SUM_FORM_MAX_M = 30


@dataclass(frozen=True)
class ErlangSpec:
    shape: int
    scale: float

    def __post_init__(self):
        if int(self.shape) != self.shape or self.shape < 1:
            raise ValueError(f"Erlang shape must be a positive integer, got {self.shape!r}")
        if not self.scale > 0:
            raise ValueError(f"Erlang scale must be positive, got {self.scale!r}")

    @property
    def mean(self) -> float:
        return self.shape * self.scale


@dataclass(frozen=True)
class MaxExpSpec:
    count: int
    mean: float

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"count must be a positive integer, got {self.count!r}")
        if not self.mean > 0:
            raise ValueError(f"mean must be positive, got {self.mean!r}")


# --------------------------------------------------------------------------
# error function family


def _erf_series(x):
    # erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (2n+1)!!, all terms positive
    term = x.copy()
    total = x.copy()
    x2 = x * x
    for n in range(1, _ERF_SERIES_TERMS):
        term = term * (2.0 * x2 / (2 * n + 1))
        total += term
    return (2.0 / _SQRT_PI) * np.exp(-x2) * total


def _erfcx_cf(x):
    # Laplace continued fraction, evaluated bottom-up; x >= _ERF_SPLIT
    f = x.copy()
    for k in range(_ERFC_CF_DEPTH, 0, -1):
        f = x + (0.5 * k) / f
    return 1.0 / (_SQRT_PI * f)


def erf(x):
    """Error function ``2/sqrt(pi) * int_0^x exp(-t^2) dt``."""
    x = np.asarray(x, dtype=float)
    a = np.abs(x)
    small = a < _ERF_SPLIT
    out = np.empty_like(a)
    if np.any(small):
        out[small] = _erf_series(a[small])
    if np.any(~small):
        big = a[~small]
        out[~small] = 1.0 - np.exp(-big * big) * _erfcx_cf(big)
    out = np.copysign(out, x)
    return out[()] if out.ndim == 0 else out


def erfc(x):
    """Complementary error function, accurate in the far right tail."""
    x = np.asarray(x, dtype=float)
    a = np.abs(x)
    small = a < _ERF_SPLIT
    tail = np.empty_like(a)  # erfc(|x|)
    if np.any(small):
        tail[small] = 1.0 - _erf_series(a[small])
    if np.any(~small):
        big = a[~small]
        tail[~small] = np.exp(-big * big) * _erfcx_cf(big)
    out = np.where(x < 0, 2.0 - tail, tail)
    return out[()] if out.ndim == 0 else out


def erfcx(x):
    """Scaled complementary error function ``exp(x^2) * erfc(x)``.

    Finite for every ``x >= 0``; overflows to ``inf`` only for very negative
    ``x`` where the true value does.
    """
    x = np.asarray(x, dtype=float)
    a = np.abs(x)
    small = a < _ERF_SPLIT
    tail = np.empty_like(a)  # erfcx(|x|)
    if np.any(small):
        s = a[small]
        tail[small] = np.exp(s * s) * (1.0 - _erf_series(s))
    if np.any(~small):
        tail[~small] = _erfcx_cf(a[~small])
    with np.errstate(over="ignore"):
        out = np.where(x < 0, 2.0 * np.exp(a * a) - tail, tail)
    return out[()] if out.ndim == 0 else out


# --------------------------------------------------------------------------
# regularized incomplete gamma, integer shape


def gamma_q(n: int, x):
    """Upper regularized incomplete gamma ``Q(n, x)`` for integer ``n >= 1``.

    Uses the finite Poisson sum ``exp(-x) * sum_{k<n} x**k / k!`` with each
    term formed in log space so large ``n`` or ``x`` cannot overflow.
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        logx = np.log(x)
        logt = -x
        out = np.exp(logt)
        for k in range(1, n):
            logt = logt + logx - math.log(k)
            out += np.exp(logt)
    out = np.where(np.isposinf(x), 0.0, np.minimum(out, 1.0))
    return out[()] if out.ndim == 0 else out


def gamma_p(n: int, x):
    """Lower regularized incomplete gamma ``P(n, x) = 1 - Q(n, x)``.

    Below ``x < n`` the complement would cancel, so the convergent tail
    ``exp(-x) * sum_{k>=n} x**k / k!`` is summed directly there.
    """
    x = np.asarray(x, dtype=float)
    out = np.array(1.0 - np.asarray(gamma_q(n, x)), dtype=float)
    low = (x < n) & (x > 0)
    if np.any(low):
        xl = x[low]
        logt = n * np.log(xl) - math.lgamma(n + 1.0) - xl
        term = np.exp(logt)
        total = term.copy()
        k = n
        # ratio x/(k+1) < 1 here; stop once every lane has converged
        while True:
            k += 1
            term = term * (xl / k)
            total += term
            if np.all(term <= 1e-17 * total) or k > n + 2000:
                break
        out[low] = total
    out = np.where(x <= 0, 0.0, out)
    return out[()] if out.ndim == 0 else out


# --------------------------------------------------------------------------
# Erlang (sum of exponentials)


def erlang_logpdf(z, spec: ErlangSpec):
    z = np.asarray(z, dtype=float)
    n, s = spec.shape, spec.scale
    with np.errstate(divide="ignore"):
        logz = np.log(z)
    if n == 1:
        out = -z / s - math.log(s)
    else:
        out = (n - 1) * logz - z / s - math.lgamma(n) - n * math.log(s)
    out = np.where(z < 0, -np.inf, out)
    return out[()] if out.ndim == 0 else out


def erlang_pdf(z, spec: ErlangSpec):
    """Density of the sum of ``spec.shape`` exponentials with mean ``spec.scale``."""
    out = np.exp(erlang_logpdf(z, spec))
    return out[()] if np.ndim(out) == 0 else out


def erlang_cdf(z, spec: ErlangSpec):
    return gamma_p(spec.shape, np.asarray(z, dtype=float) / spec.scale)


def erlang_sf(z, spec: ErlangSpec):
    z = np.asarray(z, dtype=float)
    out = np.where(z <= 0, 1.0, gamma_q(spec.shape, np.maximum(z, 0.0) / spec.scale))
    return out[()] if out.ndim == 0 else out


# --------------------------------------------------------------------------
# maximum of exponentials


def max_exp_cdf(y, spec: MaxExpSpec):
    y = np.maximum(np.asarray(y, dtype=float), 0.0)
    out = (-np.expm1(-y / spec.mean)) ** spec.count
    return out[()] if out.ndim == 0 else out


def max_exp_pdf_product(y, spec: MaxExpSpec):
    """``M (1 - e^{-y/w})^{M-1} e^{-y/w} / w``; stable for any ``M``."""
    y = np.maximum(np.asarray(y, dtype=float), 0.0)
    m, w = spec.count, spec.mean
    out = (m / w) * (-np.expm1(-y / w)) ** (m - 1) * np.exp(-y / w)
    return out[()] if out.ndim == 0 else out


def max_exp_pdf_sum(y, spec: MaxExpSpec):
    """Alternating binomial-sum form of the density of the maximum.

    The alternating sum loses roughly ``2**(M-1)`` ulps to cancellation in
    floating point, so terms are accumulated exactly as rationals built from
    the (exactly representable) double ``e^{-y/w}``.
    """
    y = np.maximum(np.asarray(y, dtype=float), 0.0)
    m, w = spec.count, spec.mean
    coeffs = [math.comb(m - 1, k) * (-1) ** k for k in range(m)]
    flat = np.exp(-y / w).ravel()
    out = np.empty_like(flat)
    for i, r in enumerate(flat):
        rq = Fraction(float(r))
        acc = Fraction(0)
        power = rq
        for c in coeffs:
            acc += c * power
            power *= rq
        out[i] = float(acc) * (m / w)
    out = out.reshape(y.shape)
    return out[()] if out.ndim == 0 else out


def max_exp_pdf(y, spec: MaxExpSpec):
    """Density of the maximum of ``spec.count`` exponentials of mean ``spec.mean``.

    The binomial-sum form is used up to ``M = 30`` and the product form
    beyond, where the sum is too expensive to accumulate exactly.
    """
    if spec.count <= _SUM_FORM_MAX_M:
        return max_exp_pdf_sum(y, spec)
    return max_exp_pdf_product(y, spec)


# --------------------------------------------------------------------------
# samplers


def exponential_from_uniform(u, mean):
    """Inverse-CDF transform of uniforms on ``[0, 1)`` to exponentials."""
    return -mean * np.log1p(-np.asarray(u, dtype=float))


def sample_exponential(mean: float, rng: np.random.Generator, size=None):
    if not mean > 0:
        raise ValueError(f"mean must be positive, got {mean!r}")
    return exponential_from_uniform(rng.random(size), mean)


def sample_erlang(spec: ErlangSpec, rng: np.random.Generator, size=None):
    shape = () if size is None else np.atleast_1d(size).tolist()
    draws = sample_exponential(spec.scale, rng, (*shape, spec.shape))
    return draws.sum(axis=-1)


def sample_max_exp(spec: MaxExpSpec, rng: np.random.Generator, size=None):
    shape = () if size is None else np.atleast_1d(size).tolist()
    draws = sample_exponential(spec.mean, rng, (*shape, spec.count))
    return draws.max(axis=-1)
