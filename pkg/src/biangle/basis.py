"""Orthogonal polynomials P_{n,k} on the parabolic biangle 0 <= x1^2 <= x2 <= 1."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .jacobi1d import jacobi_at_one, jacobi_table, log_pochhammer, norm_h

MEMBERSHIP_TOL = 1e-12


@dataclass(frozen=True)
class BiangleParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.basis_valid:
            raise ValueError(
                f"biangle basis needs alpha, beta > -1/2, got ({self.alpha}, {self.beta})"
            )

    @property
    def basis_valid(self) -> bool:
        return self.alpha > -0.5 and self.beta > -0.5

    @property
    def theorem_valid(self) -> bool:
        """Hypothesis alpha - 1/2 >= beta >= 0 of the summability theorems."""
        return self.alpha - 0.5 >= self.beta >= 0

    @property
    def product_formula_valid(self) -> bool:
        return self.beta > 0 and self.alpha - self.beta > 0.5


@dataclass(frozen=True)
class BianglePoint:
    x1: float
    x2: float

    def __post_init__(self):
        x1, x2 = float(self.x1), float(self.x2)
        if x2 > 1 + MEMBERSHIP_TOL or x1 * x1 > x2 + MEMBERSHIP_TOL or x2 < -MEMBERSHIP_TOL:
            raise ValueError(f"({x1}, {x2}) is not in the biangle")
        # project small violations onto the boundary
        x2 = min(max(x2, 0.0), 1.0)
        if x1 * x1 > x2:
            x1 = math.copysign(math.sqrt(x2), x1)
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "x2", x2)


E_POINT = BianglePoint(1.0, 1.0)


def check_points(x1, x2):
    """Validate and project arrays of biangle coordinates."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.any(x2 > 1 + MEMBERSHIP_TOL) or np.any(x2 < -MEMBERSHIP_TOL) or np.any(
        x1 * x1 > x2 + MEMBERSHIP_TOL
    ):
        raise ValueError("points outside the biangle")
    x2 = np.clip(x2, 0.0, 1.0)
    r = np.sqrt(x2)
    return np.clip(x1, -r, r), x2


def _coords(x):
    if isinstance(x, BianglePoint):
        return np.asarray(x.x1), np.asarray(x.x2)
    x1, x2 = x
    return check_points(x1, x2)


def log_weight_W_constant(p: BiangleParams) -> float:
    a, b = p.alpha, p.beta
    return (
        math.lgamma(a + b + 1.5)
        - math.lgamma(0.5)
        - math.lgamma(a + 0.5)
        - math.lgamma(b + 0.5)
    )


def weight_W(p: BiangleParams, x):
    """Normalized density W^{alpha,beta} at a point or ``(x1, x2)`` arrays."""
    x1, x2 = _coords(x)
    a, b = p.alpha - 0.5, p.beta - 0.5
    gap = x2 - x1 * x1
    if (a < 0 and np.any(x2 >= 1)) or (b < 0 and np.any(gap <= 0)):
        raise ValueError("W is singular on this part of the boundary")
    out = math.exp(log_weight_W_constant(p)) * (1 - x2) ** a * gap**b
    return float(out) if out.ndim == 0 else out


def q_table(lam, kmax, x1, x2):
    """Homogenized Gegenbauer-type factors q_0..q_kmax.

    q_k(x1, x2) = x2^{k/2} P_k^{(lam, lam)}(x1 / sqrt(x2)), evaluated by the
    symmetric recurrence with t -> x1 and the constant term scaled by x2,
    so the cusp x2 = 0 is regular.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    out = np.empty((kmax + 1,) + np.broadcast(x1, x2).shape)
    out[0] = 1.0
    if kmax == 0:
        return out
    out[1] = (lam + 1.0) * x1
    for k in range(2, kmax + 1):
        c = 2.0 * k + 2 * lam
        den = 2.0 * k * (k + 2 * lam) * (c - 2.0)
        quad = (c - 2.0) * (c - 1.0) * c / den
        back = 2.0 * (k + lam - 1.0) ** 2 * c / den
        out[k] = quad * x1 * out[k - 1] - back * x2 * out[k - 2]
    return out


def basis_table(p: BiangleParams, nmax: int, x1, x2):
    """All P_{n,k}, 0 <= k <= n <= nmax, at the given coordinates.

    Returns an array of shape ``(nmax+1, nmax+1) + shape``
    indexed ``[n, k]``; entries with k > n are zero.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    shape = np.broadcast(x1, x2).shape
    out = np.zeros((nmax + 1, nmax + 1) + shape)
    q = q_table(p.beta - 0.5, nmax, x1, x2)
    s = 2.0 * x2 - 1.0
    for k in range(nmax + 1):
        radial = jacobi_table(p.alpha - 0.5, p.beta + k, nmax - k, s)
        for j in range(nmax - k + 1):
            out[k + j, k] = radial[j] * q[k]
    return out


def basis_eval(p: BiangleParams, n: int, k: int, x):
    """P_{n,k}^{alpha,beta} at a point or ``(x1, x2)`` arrays."""
    if not 0 <= k <= n:
        raise IndexError(f"need 0 <= k <= n, got n={n}, k={k}")
    x1, x2 = _coords(x)
    radial = jacobi_table(p.alpha - 0.5, p.beta + k, n - k, 2.0 * x2 - 1.0)[n - k]
    out = radial * q_table(p.beta - 0.5, k, x1, x2)[k]
    return float(out) if np.ndim(out) == 0 else out


def basis_at_e(p: BiangleParams, n: int, k: int) -> float:
    """P_{n,k}(e) = (alpha+1/2)_{n-k} (beta+1/2)_k / ((n-k)! k!)."""
    return jacobi_at_one(p.alpha - 0.5, n - k) * jacobi_at_one(p.beta - 0.5, k)


def basis_norm_g(p: BiangleParams, n: int, k: int) -> float:
    """Reciprocal squared norm g_{n,k} of P_{n,k} in L^2(W).

    The radial factor is normalized against x2^{beta+k} while W carries
    x2^beta, hence the moment ratio (beta+1)_k / (alpha+beta+3/2)_k.
    """
    if not 0 <= k <= n:
        raise IndexError(f"need 0 <= k <= n, got n={n}, k={k}")
    a, b = p.alpha, p.beta
    lm, _ = log_pochhammer(b + 1, k)
    ld, _ = log_pochhammer(a + b + 1.5, k)
    moment = math.exp(lm - ld)
    return 1.0 / (
        norm_h(a - 0.5, b + k, n - k) * norm_h(b - 0.5, b - 0.5, k) * moment
    )


def norm_table(p: BiangleParams, nmax: int) -> np.ndarray:
    """g_{n,k} as an (nmax+1, nmax+1) lower-triangular array."""
    g = np.zeros((nmax + 1, nmax + 1))
    for n in range(nmax + 1):
        for k in range(n + 1):
            g[n, k] = basis_norm_g(p, n, k)
    return g
