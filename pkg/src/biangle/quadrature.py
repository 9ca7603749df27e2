"""Gauss-Jacobi rules on [-1, 1] and tensor rules on the parabolic biangle."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .jacobi1d import JacobiParams, jacobi_table, norm_h

MAX_NODES = 10_000


def weighted_sum(values, weights):
    """Sum of values * weights over the last axis.

    numpy's pairwise summation is used instead of BLAS so results do not
    depend on the BLAS thread count.
    """
    return np.sum(np.asarray(values) * weights, axis=-1)


class QuadratureError(ArithmeticError):
    """A rule could not be built to working accuracy."""


@dataclass(frozen=True)
class QuadratureRule:
    params: JacobiParams
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values) -> float:
        return float(weighted_sum(values, self.weights))


@dataclass(frozen=True)
class BiangleRule:
    params: "BiangleParams"
    x1: np.ndarray
    x2: np.ndarray
    weights: np.ndarray
    degree: int

    @property
    def nodes(self):
        return np.column_stack([self.x1, self.x2])

    def integrate(self, values) -> float:
        return float(weighted_sum(values, self.weights))


def _recurrence_coeffs(a, b, m):
    """Monic recurrence coefficients (diagonal, off-diagonal^2) for w^{(a,b)}."""
    k = np.arange(m, dtype=float)
    s = 2 * k + a + b
    diag = np.empty(m)
    k1 = np.arange(1, m, dtype=float)
    s1 = 2 * k1 + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        diag[:] = (b * b - a * a) / (s * (s + 2))
        off2 = 4 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b) / (s1 * s1 * (s1 + 1) * (s1 - 1))
    diag[0] = (b - a) / (a + b + 2)
    if m > 1:
        # closed form at k = 1 avoids 0/0 when a + b = -1
        off2[0] = 4 * (1 + a) * (1 + b) / ((2 + a + b) ** 2 * (3 + a + b))
    return diag, off2


def _orthonormal_sq_sum(a, b, m, x):
    """Sum_{k<m} p_k(x)^2 with p_k orthonormal for the normalized weight."""
    table = jacobi_table(a, b, m - 1, x)
    h = np.array([norm_h(a, b, k) for k in range(m)])
    return np.einsum("k...,k->...", table * table, 1.0 / h)


@lru_cache(maxsize=256)
def _gauss_jacobi_cached(a, b, m):
    diag, off2 = _recurrence_coeffs(a, b, m)
    if m == 1:
        nodes = diag.copy()
    else:
        nodes = eigh_tridiagonal(diag, np.sqrt(off2), eigvals_only=True)
    # Newton polish on P_m
    for _ in range(20):
        tab = jacobi_table(a, b, m, nodes)
        pm = tab[m]
        # derivative via d/dt P_m^{(a,b)} = (m+a+b+1)/2 P_{m-1}^{(a+1,b+1)}
        dpm = 0.5 * (m + a + b + 1) * jacobi_table(a + 1, b + 1, m - 1, nodes)[m - 1]
        step = pm / dpm
        nodes = nodes - step
        if np.max(np.abs(step)) < 1e-15:
            break
    else:
        if np.max(np.abs(step)) > 1e-12:
            raise QuadratureError(
                f"Gauss-Jacobi nodes did not converge for a={a}, b={b}, m={m}"
            )
    weights = 1.0 / _orthonormal_sq_sum(a, b, m, nodes)
    if np.any(np.diff(nodes) <= 0) or np.any(np.abs(nodes) >= 1) or np.any(weights <= 0):
        raise QuadratureError(f"degenerate Gauss-Jacobi rule for a={a}, b={b}, m={m}")
    weights = weights / math.fsum(weights)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def gauss_jacobi(p: JacobiParams, m: int) -> QuadratureRule:
    """m-node Gauss rule for the normalized Jacobi density.

    Nodes come from the Golub-Welsch eigenproblem and are polished by
    Newton steps on P_m; weights are Christoffel numbers.
    """
    if not 1 <= m <= MAX_NODES:
        raise ValueError(f"number of nodes must be in [1, {MAX_NODES}], got {m}")
    nodes, weights = _gauss_jacobi_cached(float(p.alpha), float(p.beta), int(m))
    return QuadratureRule(p, nodes, weights)


def biangle_rule(p, m: int) -> BiangleRule:
    """m x m tensor rule for W^{alpha,beta} on the biangle.

    With x1 = u sqrt(x2) the weight factors into a Jacobi density in x2
    (mapped from [-1, 1]) times a symmetric Jacobi density in u.
    Node ordering is x2-major.
    """
    if m < 1:
        raise ValueError("m must be positive")
    outer = gauss_jacobi(JacobiParams(p.alpha - 0.5, p.beta), m)
    inner = gauss_jacobi(JacobiParams(p.beta - 0.5, p.beta - 0.5), m)
    x2 = 0.5 * (outer.nodes + 1.0)
    X2, U = np.meshgrid(x2, inner.nodes, indexing="ij")
    WO, WI = np.meshgrid(outer.weights, inner.weights, indexing="ij")
    return BiangleRule(
        params=p,
        x1=(U * np.sqrt(X2)).ravel(),
        x2=X2.ravel(),
        weights=(WO * WI).ravel(),
        degree=2 * m - 1,
    )


def dump_rule_csv(rule: BiangleRule, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node1", "node2", "weight"])
        for a, b, w in zip(rule.x1, rule.x2, rule.weights):
            writer.writerow([repr(float(a)), repr(float(b)), repr(float(w))])
