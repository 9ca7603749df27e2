"""Fourier coefficients, Cesaro (C, delta) means and their kernels on the biangle.

Kernels are available two ways: the direct double sum over the basis and
a single integral over t of a univariate Jacobi kernel evaluated at
z(x; t). The two must agree; that agreement is the central check of the
package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import (
    E_POINT,
    BiangleParams,
    _coords,
    basis_table,
    check_points,
    norm_table,
)
from .jacobi1d import JacobiParams, jacobi_at_one, jacobi_table, log_pochhammer, norm_h
from .quadrature import BiangleRule, biangle_rule, gauss_jacobi, weighted_sum

CHUNK = 2048
L1_RULE_SIZE = 200


class PoleError(ZeroDivisionError):
    """A closed-form coefficient has a vanishing denominator."""


@dataclass(frozen=True)
class CesaroOrder:
    delta: float

    def __post_init__(self):
        if not self.delta >= 0:
            raise ValueError(f"Cesaro order must be >= 0, got {self.delta}")


@dataclass
class TriangularCoeffs:
    """Coefficients c(n, k) for 0 <= k <= n <= N, stored lower-triangular."""

    N: int
    values: np.ndarray

    @classmethod
    def zeros(cls, N):
        return cls(N, np.zeros((N + 1, N + 1)))

    def __getitem__(self, nk):
        n, k = nk
        if not 0 <= k <= n <= self.N:
            raise IndexError(f"(n, k) = {nk} outside 0 <= k <= n <= {self.N}")
        return float(self.values[n, k])

    def __setitem__(self, nk, value):
        n, k = nk
        if not 0 <= k <= n <= self.N:
            raise IndexError(f"(n, k) = {nk} outside 0 <= k <= n <= {self.N}")
        self.values[n, k] = value

    def __len__(self):
        return (self.N + 1) * (self.N + 2) // 2

    def items(self):
        for n in range(self.N + 1):
            for k in range(n + 1):
                yield (n, k), float(self.values[n, k])


def log_cesaro_A(delta, n):
    return math.lgamma(n + delta + 1) - math.lgamma(delta + 1) - math.lgamma(n + 1)


def cesaro_A(delta: float, n: int) -> float:
    """A_n^delta = binomial(n + delta, n)."""
    if not delta > -1:
        raise ValueError("delta must exceed -1")
    return math.exp(log_cesaro_A(delta, n))


def cesaro_weights(delta, n, shift=0):
    """Ratios A_{n-k}^{delta-shift} / A_n^delta for k = 0..n."""
    if delta - shift == -1:
        # A_m^{-1} vanishes for m >= 1
        out = np.zeros(n + 1)
        out[n] = 1.0 / cesaro_A(delta, n)
        return out
    top = np.array([log_cesaro_A(delta - shift, n - k) for k in range(n + 1)])
    return np.exp(top - log_cesaro_A(delta, n))


def fourier_coeffs(f, p: BiangleParams, N: int, rule: BiangleRule) -> TriangularCoeffs:
    """Quadrature approximation of f_hat(n, k) for n <= N.

    ``f`` is called once with the arrays ``(x1, x2)`` of rule nodes.
    """
    fv = np.asarray(f(rule.x1, rule.x2), dtype=float) * rule.weights
    fv = np.broadcast_to(fv, rule.weights.shape)
    values = np.zeros((N + 1, N + 1))
    for s in range(0, fv.size, CHUNK):
        sl = slice(s, s + CHUNK)
        values += np.sum(basis_table(p, N, rule.x1[sl], rule.x2[sl]) * fv[sl], axis=-1)
    return TriangularCoeffs(N, values)


def projections(coeffs: TriangularCoeffs, p: BiangleParams, x1, x2):
    """Degree-wise projections P_k f at the points, shape (N+1, npts)."""
    x1, x2 = check_points(x1, x2)
    x1, x2 = np.atleast_1d(x1).ravel(), np.atleast_1d(x2).ravel()
    scaled = coeffs.values * norm_table(p, coeffs.N)
    out = np.empty((coeffs.N + 1, x1.size))
    for s in range(0, x1.size, CHUNK):
        sl = slice(s, s + CHUNK)
        table = basis_table(p, coeffs.N, x1[sl], x2[sl])
        out[:, sl] = np.sum(table * scaled[:, :, None], axis=1)
    return out


def cesaro_mean_eval(coeffs: TriangularCoeffs, p: BiangleParams, order: CesaroOrder, n: int, x):
    """S_n^delta f at a point or at ``(x1, x2)`` arrays, from Fourier coefficients."""
    if n > coeffs.N:
        raise IndexError(f"degree {n} exceeds available coefficients N={coeffs.N}")
    x1, x2 = _coords(x)
    truncated = TriangularCoeffs(n, coeffs.values[: n + 1, : n + 1])
    proj = projections(truncated, p, x1, x2)
    out = (cesaro_weights(order.delta, n)[:, None] * proj).sum(axis=0).reshape(np.shape(x1))
    return float(out) if out.ndim == 0 else out


def kernel_direct(p: BiangleParams, order: CesaroOrder, n: int, x, y=E_POINT):
    """Summability kernel as the double sum over (k, l), k <= n."""
    x1, x2 = _coords(x)
    y1, y2 = _coords(y)
    g = norm_table(p, n)
    lam = cesaro_weights(order.delta, n)
    tx = basis_table(p, n, x1, x2)
    ty = basis_table(p, n, y1, y2)
    coef = g * lam[:, None]
    extra = max(tx.ndim, ty.ndim) - 2

    def expand(arr):
        return arr.reshape(arr.shape + (1,) * (extra - (arr.ndim - 2)))

    out = (expand(coef) * expand(tx) * expand(ty)).sum(axis=(0, 1))
    return float(out) if np.ndim(out) == 0 else out


def z_arg(x, t):
    """z(x; t) = (1+t)^2/2 + (1-t^2) x1 + (1-t)^2 x2 / 2 - 1, in [-1, 1]."""
    x1, x2 = _coords(x)
    t = np.asarray(t, dtype=float)
    z = 0.5 * (1 + t) ** 2 + (1 - t * t) * x1 + 0.5 * (1 - t) ** 2 * x2 - 1
    z = np.clip(z, -1.0, 1.0)
    return float(z) if np.ndim(z) == 0 else z


def _reduced_params(p):
    return p.alpha + p.beta + 0.5, p.beta


def univariate_coefficients(p: BiangleParams, delta: float, n: int, shift=0):
    """Coefficients of P_k^{(a,b)}, a = alpha+beta+1/2, b = beta, in the kernels.

    ``shift=0`` gives the (C, delta) univariate kernel; ``shift=1`` gives the
    combination A_{n-k}^{delta-1}/A_n^delta used for the biangle kernel at e.
    """
    a, b = _reduced_params(p)
    lam = cesaro_weights(delta, n, shift)
    reproducing = np.array([jacobi_at_one(a, k) / norm_h(a, b, k) for k in range(n + 1)])
    return lam * reproducing


def _jacobi_series(a, b, coef, t):
    """Sum_k coef[k] P_k^{(a,b)}(t) by forward recurrence, no table kept."""
    t = np.asarray(t, dtype=float)
    n = len(coef) - 1
    p0 = np.ones_like(t)
    acc = coef[0] * p0
    if n == 0:
        return acc
    p1 = 0.5 * ((a + b + 2.0) * t + (a - b))
    acc = acc + coef[1] * p1
    for k in range(2, n + 1):
        c = 2.0 * k + a + b
        den = 2.0 * k * (k + a + b) * (c - 2.0)
        lin = (c - 1.0) * (a * a - b * b) / den
        quad = (c - 2.0) * (c - 1.0) * c / den
        back = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c / den
        p0, p1 = p1, (lin + quad * t) * p1 - back * p0
        acc += coef[k] * p1
    return acc


def univariate_cesaro_kernel(p: BiangleParams, order: CesaroOrder, n: int, t):
    """k_n^delta(t) for the Jacobi weight with parameters (alpha+beta+1/2, beta)."""
    a, b = _reduced_params(p)
    t = np.clip(np.asarray(t, dtype=float), -1.0, 1.0)
    out = _jacobi_series(a, b, univariate_coefficients(p, order.delta, n), t)
    return float(out) if np.ndim(out) == 0 else out


def default_m_quad(n):
    return n + 8


def _integrate_over_t(p, coef, x1, x2, m_quad):
    a, b = _reduced_params(p)
    rule = gauss_jacobi(JacobiParams(a, b), m_quad)
    t = rule.nodes
    x1 = np.atleast_1d(x1).ravel()
    x2 = np.atleast_1d(x2).ravel()
    out = np.empty(x1.shape)
    c_one = 0.5 * (1 + t) ** 2 - 1
    c_x1 = 1 - t * t
    c_x2 = 0.5 * (1 - t) ** 2
    for s in range(0, x1.size, CHUNK):
        sl = slice(s, s + CHUNK)
        z = c_one + np.multiply.outer(x1[sl], c_x1) + np.multiply.outer(x2[sl], c_x2)
        np.clip(z, -1.0, 1.0, out=z)
        out[sl] = weighted_sum(_jacobi_series(a, b, coef, z), rule.weights)
    return out


def kernel_closed(p: BiangleParams, order: CesaroOrder, n: int, x, m_quad: int | None = None):
    """K_n^delta(x) = K_n^delta(x, e) as one Gauss-Jacobi integral over t.

    Requires delta > 0. Accepts a point or ``(x1, x2)`` arrays.
    """
    if not order.delta > 0:
        raise ValueError("the closed form needs delta > 0; use kernel_closed_projection")
    m_quad = default_m_quad(n) if m_quad is None else m_quad
    if m_quad < n + 2:
        raise ValueError(f"m_quad={m_quad} too small for degree {n} (need >= n+2)")
    x1, x2 = _coords(x)
    coef = univariate_coefficients(p, order.delta, n, shift=1)
    out = _integrate_over_t(p, coef, x1, x2, m_quad).reshape(np.shape(x1))
    return float(out) if out.ndim == 0 else out


def kernel_closed_projection(p: BiangleParams, n: int, x, m_quad: int | None = None):
    """Partial-sum kernel K_n(x, e) = P_n(1)/h_n * integral of P_n(z(x; t))."""
    m_quad = default_m_quad(n) if m_quad is None else m_quad
    a, b = _reduced_params(p)
    x1, x2 = _coords(x)
    coef = np.zeros(n + 1)
    coef[n] = jacobi_at_one(a, n) / norm_h(a, b, n)
    out = _integrate_over_t(p, coef, x1, x2, m_quad).reshape(np.shape(x1))
    return float(out) if out.ndim == 0 else out


def kernel_at_e(p: BiangleParams, order: CesaroOrder, n: int, x, m_quad: int | None = None):
    """K_n^delta(x, e) through the single-integral form, any delta >= 0."""
    if order.delta == 0:
        return kernel_closed_projection(p, n, x, m_quad)
    return kernel_closed(p, order, n, x, m_quad)


def kernel_l1_norm(p: BiangleParams, order: CesaroOrder, n: int, rule: BiangleRule | None = None) -> float:
    """Integral of |K_n^delta| W over the biangle."""
    if rule is None:
        rule = biangle_rule(p, L1_RULE_SIZE)
    values = kernel_at_e(p, order, n, (rule.x1, rule.x2))
    return float(weighted_sum(np.abs(values), rule.weights))


def chebyshev_grid(grid_size):
    """Tensor grid in (u, x2) with Chebyshev-Lobatto spacing, mapped to B."""
    j = np.arange(grid_size)
    u = np.cos(np.pi * j / max(grid_size - 1, 1))
    x2 = 0.5 * (1 + u)
    U, X2 = np.meshgrid(u, x2, indexing="ij")
    x1 = (U * np.sqrt(X2)).ravel()
    x2 = X2.ravel()
    extra1 = np.array([1.0, -1.0, 0.0, 0.0])
    extra2 = np.array([1.0, 1.0, 0.0, 1.0])
    return np.concatenate([x1, extra1]), np.concatenate([x2, extra2])


def kernel_min(p: BiangleParams, order: CesaroOrder, n: int, grid_size: int = 64) -> float:
    """Minimum of K_n^delta over a Chebyshev tensor grid including the corners."""
    x1, x2 = chebyshev_grid(grid_size)
    return float(np.min(kernel_at_e(p, order, n, (x1, x2))))


# --- addition formula -------------------------------------------------------


def addition_coeff_a(alpha: float, beta: float, n: int, k: int, l: int) -> float:
    """Coefficient a_{n,k,l}^{(alpha,beta)} of the Jacobi addition formula.

    The ratios (k+l+alpha)/(k+alpha) at l = 0 and (k-l+beta)/((k-l)/2+beta)
    at k = l are identically 1 and are cancelled before evaluation, so
    alpha = 0 or beta = 0 only produce a PoleError where the coefficient
    genuinely blows up.
    """
    if not 0 <= l <= k <= n:
        raise IndexError(f"need 0 <= l <= k <= n, got ({n}, {k}, {l})")
    num, den = [], []
    if l != 0:
        num.append(k + l + alpha)
        den.append(k + alpha)
    if k != l:
        num.append(k - l + beta)
        den.append(0.5 * (k - l) + beta)
    if any(d == 0 for d in den):
        raise PoleError(f"vanishing factor in a_{{{n},{k},{l}}} for alpha={alpha}, beta={beta}")
    sign, log_num = 1.0, math.lgamma(n - k + 1)
    for factor in num:
        if factor == 0:
            return 0.0
        log_num += math.log(abs(factor))
        sign *= math.copysign(1.0, factor)
    for a, m in ((n + alpha + beta + 1, k), (2 * beta + 1, k - l), (n - l + beta + 1, l)):
        lv, sv = log_pochhammer(a, m)
        if sv == 0:
            return 0.0
        log_num += lv
        sign *= sv
    log_den = 2 * k * math.log(2.0)
    for d in den:
        log_den += math.log(abs(d))
        sign *= math.copysign(1.0, d)
    for a, m in ((beta + 1, k), (k + alpha + 1, n - k + l), (beta + 0.5, k - l)):
        lv, sv = log_pochhammer(a, m)
        if sv == 0:
            raise PoleError(f"vanishing Pochhammer ({a})_{m} in a_{{{n},{k},{l}}}")
        log_den += lv
        sign *= sv
    return sign * math.exp(log_num - log_den)


def addition_formula_sides(alpha, beta, n, xi, eta, r, psi):
    """Left and right sides of the Jacobi addition formula at one sample."""
    arg = (
        0.5 * (1 + xi) * (1 + eta)
        + 0.5 * (1 - xi) * (1 - eta) * r * r
        + math.sqrt(max(1 - xi * xi, 0.0)) * math.sqrt(max(1 - eta * eta, 0.0)) * r * math.cos(psi)
        - 1
    )
    arg = min(max(arg, -1.0), 1.0)
    lhs = float(jacobi_table(alpha, beta, n, arg)[n])
    rhs = 0.0
    for k in range(n + 1):
        for l in range(k + 1):
            a = addition_coeff_a(alpha, beta, n, k, l)
            if a == 0.0:
                continue
            pa, pb = alpha + k + l, beta + k - l
            fx = (1 - xi) ** ((k + l) / 2) * (1 + xi) ** ((k - l) / 2)
            fy = (1 - eta) ** ((k + l) / 2) * (1 + eta) ** ((k - l) / 2)
            jx = jacobi_table(pa, pb, n - k, xi)[n - k]
            jy = jacobi_table(pa, pb, n - k, eta)[n - k]
            radial = jacobi_table(alpha - beta - 1, beta + k - l, l, 2 * r * r - 1)[l]
            ang = jacobi_table(beta - 0.5, beta - 0.5, k - l, math.cos(psi))[k - l]
            rhs += a * fx * jx * fy * jy * radial * r ** (k - l) * ang
    return lhs, rhs


def addition_formula_residual(alpha: float, beta: float, n: int, sample) -> float:
    """|LHS - RHS| of the addition formula at ``sample = (xi, eta, r, psi)``."""
    xi, eta, r, psi = sample
    if not (-1 <= xi <= 1 and -1 <= eta <= 1 and 0 <= r <= 1 and 0 <= psi <= math.pi):
        raise ValueError(f"sample {sample} outside [-1,1]^2 x [0,1] x [0,pi]")
    lhs, rhs = addition_formula_sides(alpha, beta, n, xi, eta, r, psi)
    return float(abs(lhs - rhs))
