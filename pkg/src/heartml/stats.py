"""Beta-distribution quantiles for confidence intervals and pruning bounds.

Primary route is scipy's inverse; a self-contained fallback inverts the
regularized incomplete beta function by bisection. Both are exposed so tests
can cross-check the routes against each other.
"""

from __future__ import annotations

import math

try:
    from scipy.stats import beta as _scipy_beta
except ImportError:  # pragma: no cover - scipy is a hard dependency, kept defensive
    _scipy_beta = None

# Absolute tolerance on the probability scale for the bisection inverse.
_BISECT_TOL = 1e-12
_CF_MAX_ITER = 300
_CF_EPS = 1e-15


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) via the continued-fraction expansion (Lentz's method)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    # Use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) where the fraction converges fast.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def _beta_cf(a: float, b: float, x: float) -> float:
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_EPS:
        d = _CF_EPS
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_EPS:
            d = _CF_EPS
        c = 1.0 + aa / c
        if abs(c) < _CF_EPS:
            c = _CF_EPS
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_EPS:
            d = _CF_EPS
        c = 1.0 + aa / c
        if abs(c) < _CF_EPS:
            c = _CF_EPS
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h


def beta_quantile_bisect(p: float, a: float, b: float) -> float:
    """Inverse of I_x(a, b) by bisection on [0, 1]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"quantile probability out of range: {p}")
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > _BISECT_TOL:
        mid = (lo + hi) / 2.0
        if regularized_incomplete_beta(a, b, mid) < p:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def beta_quantile(p: float, a: float, b: float) -> float:
    """Beta(a, b) quantile; scipy when available, bisection fallback otherwise."""
    if _scipy_beta is not None:
        return float(_scipy_beta.ppf(p, a, b))
    return beta_quantile_bisect(p, a, b)


def binomial_upper_bound(errors: int, n: int, cf: float) -> float:
    """One-sided upper confidence bound on a binomial error rate.

    The largest error probability p such that observing <= ``errors`` failures
    in ``n`` trials has probability >= ``cf``; the pessimistic-error bound used
    by confidence-factor pruning. Returns 1.0 when errors >= n, 0.0 for n <= 0.
    """
    if n <= 0:
        return 0.0
    if errors >= n:
        return 1.0
    return beta_quantile(1.0 - cf, errors + 1, n - errors)
