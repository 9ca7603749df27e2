"""Product formula, generalized translation and convolution on the biangle.

The product formula is stated for points written as (x1, s) with s^2 the
biangle's second coordinate. ``translate`` and ``convolve`` take ordinary
biangle coordinates and do the square-root change internally.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BiangleParams, _coords, basis_at_e, basis_table
from .jacobi1d import JacobiParams
from .quadrature import BiangleRule, gauss_jacobi, weighted_sum

CUSP_EPS = 1e-8
DEGENERATE_TOL = 1e-14


class DegenerateError(ArithmeticError):
    """The product-formula maps are singular at this configuration."""


@dataclass(frozen=True)
class ProductMeasureRule:
    """Tensor rule for the probability measure on [0,1] x [0,pi]^3.

    Nodes are stored as r and the cosines of the three angles.
    """

    params: BiangleParams
    r: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    c3: np.ndarray
    weights: np.ndarray

    @property
    def nodes(self):
        return np.column_stack(
            [self.r, np.arccos(self.c1), np.arccos(self.c2), np.arccos(self.c3)]
        )

    def __len__(self):
        return self.weights.size


def map_D(a, b, r, psi):
    """a b + sqrt(1-a^2) sqrt(1-b^2) r cos(psi)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = a * b + np.sqrt(np.clip(1 - a * a, 0, None)) * np.sqrt(
        np.clip(1 - b * b, 0, None)
    ) * r * np.cos(psi)
    out = np.clip(out, -1.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _E_squared(a, b, r, c):
    sa = np.sqrt(np.clip(1 - a * a, 0, None))
    sb = np.sqrt(np.clip(1 - b * b, 0, None))
    return a * a * b * b + (1 - a * a) * (1 - b * b) * r * r + 2 * a * b * sa * sb * r * c


def map_E(x, r, psi):
    """|a b + sqrt(1-a^2) sqrt(1-b^2) r e^{i psi}| for the pair x = (a, b)."""
    a, b = (np.asarray(v, dtype=float) for v in x)
    sq = _E_squared(a, b, r, np.cos(psi))
    if np.any(sq < -DEGENERATE_TOL):
        raise ArithmeticError("negative radicand in E")
    out = np.sqrt(np.clip(sq, 0, None))
    return float(out) if out.ndim == 0 else out


def map_F(x, y, r, psi1, psi2, psi3):
    """F(x, y; r, psi1, psi2, psi3) for x, y in product-formula coordinates.

    x = (x1, x2) with |x1| <= x2, likewise y. The outer D and E act on the
    pair (x2, y2); the inner D on (x1/x2, y1/y2).
    """
    x1, x2 = x
    y1, y2 = y
    if x2 <= 0 or y2 <= 0:
        raise DegenerateError("F needs x2 > 0 and y2 > 0")
    e = map_E((x2, y2), r, psi1)
    if np.any(np.asarray(e) <= DEGENERATE_TOL):
        raise DegenerateError("E vanishes; F is undefined")
    d = map_D(x2, y2, r, psi1)
    inner = map_D(x1 / x2, y1 / y2, 1.0, psi2)
    return e * map_D(np.clip(d / e, -1, 1), inner, 1.0, psi3)


def mu_rule(p: BiangleParams, m: int, radial_exponent: float | None = None) -> ProductMeasureRule:
    """m^4-node rule for the product-formula measure.

    Density in (r, psi1, psi2, psi3) is proportional to
    (1-r^2)^{alpha-beta-3/2} r^{radial_exponent} sin^{2beta} psi1
    sin^{2beta-1} psi2 sin^{2beta-1} psi3, with radial_exponent = 2beta+1
    by default. s = r^2 and c = cos(psi) turn each factor into a Jacobi
    density, so the rule is Gauss in every variable.
    """
    if not p.product_formula_valid:
        raise ValueError(
            f"product formula measure needs beta > 0 and alpha - beta > 1/2, got {p}"
        )
    if m < 1:
        raise ValueError("m must be positive")
    a, b = p.alpha, p.beta
    if radial_exponent is None:
        radial_exponent = 2 * b + 1
    # r^e dr = s^{(e-1)/2} ds / 2 on s = r^2
    srule = gauss_jacobi(JacobiParams(a - b - 1.5, (radial_exponent - 1) / 2), m)
    c1 = gauss_jacobi(JacobiParams(b - 0.5, b - 0.5), m)
    c23 = gauss_jacobi(JacobiParams(b - 1.0, b - 1.0), m)
    r = np.sqrt(0.5 * (srule.nodes + 1))
    grids = np.meshgrid(r, c1.nodes, c23.nodes, c23.nodes, indexing="ij")
    wg = np.meshgrid(srule.weights, c1.weights, c23.weights, c23.weights, indexing="ij")
    weights = (wg[0] * wg[1] * wg[2] * wg[3]).ravel()
    weights = weights / math.fsum(weights)
    return ProductMeasureRule(p, *(g.ravel() for g in grids), weights)


def _pushforward(X1, X2, Y1, Y2, rule):
    """Points (F, E^2) of the product measure for one pair in formula coordinates.

    Uses F = D*inner + sqrt(E^2 - D^2) sqrt(1 - inner^2) cos(psi3), which
    equals the printed E * D(D/E, inner; 1, psi3) without dividing by E.
    """
    r, c1 = rule.r, rule.c1
    e2 = np.clip(_E_squared(X2, Y2, r, c1), 0.0, 1.0)
    d = X2 * Y2 + math.sqrt(max(1 - X2 * X2, 0.0)) * math.sqrt(max(1 - Y2 * Y2, 0.0)) * r * c1
    u, v = X1 / X2, Y1 / Y2
    inner = np.clip(
        u * v + math.sqrt(max(1 - u * u, 0.0)) * math.sqrt(max(1 - v * v, 0.0)) * rule.c2,
        -1.0,
        1.0,
    )
    f = d * inner + np.sqrt(np.clip(e2 - d * d, 0, None)) * np.sqrt(1 - inner * inner) * rule.c3
    # |F| <= E up to rounding
    lim = np.sqrt(e2)
    return np.clip(f, -lim, lim), e2


def _check_formula_pair(x, y):
    X1, X2 = (float(v) for v in x)
    Y1, Y2 = (float(v) for v in y)
    if X2 <= 0 or Y2 <= 0:
        raise DegenerateError("product formula is stated for x, y != 0")
    if abs(X1) > X2 or abs(Y1) > Y2 or X2 > 1 or Y2 > 1:
        raise ValueError("need |x1| <= x2 <= 1 and |y1| <= y2 <= 1")
    return X1, X2, Y1, Y2


def product_formula_residuals(
    p: BiangleParams, n_max: int, x, y, rule: ProductMeasureRule, ordering: str = "F,E2"
) -> np.ndarray:
    """Residuals for every P_{n,k}, n <= n_max, at one pair; indexed [n, k].

    ``x`` and ``y`` are in product-formula coordinates (|x1| <= x2 <= 1);
    the basis on the left is evaluated at (x1, x2^2). ``ordering`` selects
    whether F ("F,E2", the verified pairing) or E^2 ("E2,F") is fed to the
    basis as its first coordinate.
    """
    X1, X2, Y1, Y2 = _check_formula_pair(x, y)
    lhs = basis_table(p, n_max, X1, X2 * X2) * basis_table(p, n_max, Y1, Y2 * Y2)
    f, e2 = _pushforward(X1, X2, Y1, Y2, rule)
    if ordering == "F,E2":
        z1, z2 = f, e2
    elif ordering == "E2,F":
        z1, z2 = e2, f
    else:
        raise ValueError(f"unknown ordering {ordering!r}")
    integral = weighted_sum(basis_table(p, n_max, z1, z2), rule.weights)
    at_e = np.array(
        [[basis_at_e(p, n, k) if k <= n else 0.0 for k in range(n_max + 1)] for n in range(n_max + 1)]
    )
    return np.abs(lhs - at_e * integral)


def product_formula_residual(
    p: BiangleParams, n: int, k: int, x, y, rule: ProductMeasureRule, ordering: str = "F,E2"
) -> float:
    """|P_{n,k}(x1, x2^2) P_{n,k}(y1, y2^2) - P_{n,k}(e) * integral| for one (n, k)."""
    if not 0 <= k <= n:
        raise IndexError(f"need 0 <= k <= n, got n={n}, k={k}")
    return float(product_formula_residuals(p, n, x, y, rule, ordering)[n, k])


def _formula_coords(x1, x2):
    x1, x2 = _coords((x1, x2))
    if np.any(x2 <= CUSP_EPS):
        raise DegenerateError(f"translation needs second coordinate > {CUSP_EPS}")
    s = np.sqrt(x2)
    return np.clip(x1, -s, s), s


def translate_many(f, p: BiangleParams, x, y1, y2, rule: ProductMeasureRule):
    """T_x f(y) for arrays of y; ``f`` maps coordinate arrays to values."""
    if isinstance(x, tuple):
        X1, X2 = _formula_coords(*x)
    else:
        X1, X2 = _formula_coords(x.x1, x.x2)
    X1, X2 = float(X1), float(X2)
    Y1, Y2 = _formula_coords(y1, y2)
    Y1, Y2 = np.atleast_1d(Y1), np.atleast_1d(Y2)
    out = np.empty(Y1.shape)
    for i in range(Y1.size):
        z1, z2 = _pushforward(X1, X2, float(Y1[i]), float(Y2[i]), rule)
        out[i] = weighted_sum(f(z1, z2), rule.weights)
    return out


def translate(f, p: BiangleParams, x, y, rule: ProductMeasureRule) -> float:
    """Generalized translation T_x f(y) = integral of f against omega_{x,y}."""
    y1, y2 = (y.x1, y.x2) if not isinstance(y, tuple) else y
    return float(translate_many(f, p, x, y1, y2, rule)[0])


def convolve(f, g, p: BiangleParams, x, brule: BiangleRule, prule: ProductMeasureRule) -> float:
    """(f * g)(x) = integral over B of f(y) T_x g(y) W(y) dy."""
    tg = translate_many(g, p, x, brule.x1, brule.x2, prule)
    fv = np.asarray(f(brule.x1, brule.x2), dtype=float)
    return float(weighted_sum(fv * tg, brule.weights))
