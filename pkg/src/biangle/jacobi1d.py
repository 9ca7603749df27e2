"""Univariate Jacobi polynomials on [-1, 1].

Everything here is normalized against the probability density
``w^{(a,b)}(t) = C (1-t)^a (1+t)^b`` so that ``h_0 = 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_DEGREE = 10**6
CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class JacobiParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError(
                f"Jacobi parameters must exceed -1, got alpha={self.alpha}, beta={self.beta}"
            )


def pochhammer(a, n):
    """Rising factorial a (a+1) ... (a+n-1); 1 for n = 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = 1.0
    for j in range(n):
        out *= a + j
    return out


def log_gamma(x):
    """Return ``(log|Gamma(x)|, sign Gamma(x))``."""
    if x <= 0 and float(x).is_integer():
        raise ZeroDivisionError(f"Gamma has a pole at {x}")
    val = math.lgamma(x)
    if x > 0:
        return val, 1.0
    # Gamma alternates sign between consecutive negative integers
    return val, (-1.0 if math.floor(x) % 2 else 1.0)


def log_pochhammer(a, n):
    """Return ``(log|(a)_n|, sign)``; sign is 0 when the product vanishes."""
    if n == 0:
        return 0.0, 1.0
    if a > 0:
        return math.lgamma(a + n) - math.lgamma(a), 1.0
    logv, sign = 0.0, 1.0
    for j in range(n):
        f = a + j
        if f == 0:
            return -math.inf, 0.0
        logv += math.log(abs(f))
        sign *= math.copysign(1.0, f)
    return logv, sign


def _as_unit_interval(t):
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1 + CLAMP_TOL):
        bad = t[np.abs(t) > 1 + CLAMP_TOL].flat[0]
        raise ValueError(f"argument {bad!r} lies outside [-1, 1]")
    return np.clip(t, -1.0, 1.0)


def jacobi_table(a, b, n, t):
    """Values of P_0..P_n with parameters (a, b) at ``t``.

    Returns an array of shape ``(n + 1,) + shape(t)``. No parameter or
    domain validation: the recurrence is a polynomial identity, so it is
    also used for shifted parameters that leave the weight's range.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty((n + 1,) + t.shape)
    out[0] = 1.0
    if n == 0:
        return out
    out[1] = 0.5 * ((a + b + 2.0) * t + (a - b))
    for k in range(2, n + 1):
        c = 2.0 * k + a + b
        den = 2.0 * k * (k + a + b) * (c - 2.0)
        lin = (c - 1.0) * (a * a - b * b) / den
        quad = (c - 2.0) * (c - 1.0) * c / den
        back = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c / den
        out[k] = (lin + quad * t) * out[k - 1] - back * out[k - 2]
    return out


def _jacobi_raw(a, b, n, t):
    t = np.asarray(t, dtype=float)
    if n == 0:
        return np.ones_like(t)
    p0 = np.ones_like(t)
    p1 = 0.5 * ((a + b + 2.0) * t + (a - b))
    for k in range(2, n + 1):
        c = 2.0 * k + a + b
        den = 2.0 * k * (k + a + b) * (c - 2.0)
        lin = (c - 1.0) * (a * a - b * b) / den
        quad = (c - 2.0) * (c - 1.0) * c / den
        back = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c / den
        p0, p1 = p1, (lin + quad * t) * p1 - back * p0
    return p1


def jacobi_eval(p: JacobiParams, n: int, t):
    """P_n^{(alpha, beta)}(t) by the three-term recurrence.

    ``t`` may be a scalar or an array; values within 1e-12 of [-1, 1] are
    clamped onto it.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n > MAX_DEGREE:
        raise ValueError(f"degree {n} exceeds the supported maximum {MAX_DEGREE}")
    t = _as_unit_interval(t)
    out = _jacobi_raw(p.alpha, p.beta, n, t)
    return float(out) if out.ndim == 0 else out


def jacobi_at_one(a, n):
    """P_n^{(a, b)}(1) = (a+1)_n / n!, independent of b."""
    logv, sign = log_pochhammer(a + 1, n)
    return sign * math.exp(logv - math.lgamma(n + 1))


def log_weight_constant(a, b):
    return (
        math.lgamma(a + b + 2)
        - (a + b + 1) * math.log(2.0)
        - math.lgamma(a + 1)
        - math.lgamma(b + 1)
    )


def jacobi_weight(p: JacobiParams, t):
    """Normalized Jacobi density at ``t`` (scalar or array)."""
    t = np.asarray(t, dtype=float)
    if (p.alpha < 0 and np.any(t >= 1)) or (p.beta < 0 and np.any(t <= -1)):
        raise ValueError("weight is singular at this endpoint")
    if np.any(np.abs(t) > 1):
        raise ValueError("weight is supported on [-1, 1]")
    c = math.exp(log_weight_constant(p.alpha, p.beta))
    out = c * (1 - t) ** p.alpha * (1 + t) ** p.beta
    return float(out) if out.ndim == 0 else out


def norm_h(a, b, n):
    """Squared norm of P_n^{(a,b)} against the normalized weight (no validation)."""
    if n == 0:
        return 1.0
    la, sa = log_pochhammer(a + 1, n)
    lb, sb = log_pochhammer(b + 1, n)
    lc, sc = log_pochhammer(a + b + 2, n)
    logv = la + lb - lc - math.lgamma(n + 1)
    ratio = (a + b + n + 1) / (a + b + 2 * n + 1)
    return sa * sb * sc * math.exp(logv) * ratio


def jacobi_norm_h(p: JacobiParams, n: int) -> float:
    """h_n = integral of P_n^2 against the normalized Jacobi density."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return norm_h(p.alpha, p.beta, n)
