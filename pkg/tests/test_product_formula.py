import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from biangle import (
    BiangleParams,
    BianglePoint,
    CesaroOrder,
    DegenerateError,
    basis_at_e,
    basis_eval,
    biangle_rule,
    cesaro_mean_eval,
    convolve,
    fourier_coeffs,
    kernel_direct,
    map_D,
    map_E,
    map_F,
    mu_rule,
    product_formula_residual,
    translate,
)
from biangle.product_formula import product_formula_residuals

P = BiangleParams(2.0, 0.75)


@pytest.fixture(scope="module")
def rule24():
    return mu_rule(P, 24)


@pytest.fixture(scope="module")
def rule12():
    return mu_rule(P, 12)


@pytest.fixture(scope="module")
def brule():
    return biangle_rule(P, 10)


def formula_pairs(seed, count):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        pts = []
        for _ in range(2):
            s = rng.uniform(0.05, 1.0)
            pts.append((rng.uniform(-1, 1) * s, s))
        out.append(tuple(pts))
    return out


class TestMaps:
    def test_D_endpoint(self):
        assert map_D(1.0, 0.3, 0.7, 1.1) == pytest.approx(0.3)

    def test_D_origin(self):
        assert map_D(0.0, 0.0, 1.0, 0.0) == pytest.approx(1.0)

    def test_E_endpoint(self):
        assert map_E((1.0, 1.0), 0.4, 2.0) == pytest.approx(1.0)

    def test_E_origin(self):
        assert map_E((0.0, 0.0), 0.35, 1.2) == pytest.approx(0.35)

    def test_E_is_modulus(self):
        a, b, r, psi = 0.3, -0.6, 0.8, 2.2
        z = a * b + math.sqrt(1 - a * a) * math.sqrt(1 - b * b) * r * complex(math.cos(psi), math.sin(psi))
        assert map_E((a, b), r, psi) == pytest.approx(abs(z), rel=1e-14)

    def test_F_endpoint(self):
        assert map_F((1.0, 1.0), (1.0, 1.0), 0.3, 0.4, 0.5, 0.6) == pytest.approx(1.0)

    def test_F_bounded_by_E(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            (x, y), = formula_pairs(int(rng.integers(1 << 30)), 1)
            r, p1, p2, p3 = rng.uniform(0, 1), *rng.uniform(0, math.pi, 3)
            assert abs(map_F(x, y, r, p1, p2, p3)) <= map_E((x[1], y[1]), r, p1) + 1e-14

    def test_F_degenerate(self):
        with pytest.raises(DegenerateError):
            map_F((0.0, 0.0), (0.1, 0.5), 0.5, 0.1, 0.2, 0.3)


class TestMeasureRule:
    def test_mass(self, rule12):
        assert_allclose(rule12.weights.sum(), 1.0, rtol=1e-12)
        assert len(rule12) == 12**4

    def test_stable_under_refinement(self, rule12, rule24):
        assert_allclose(rule24.weights.sum(), rule12.weights.sum(), rtol=1e-12)

    def test_odd_angle_moment(self, rule12):
        assert abs(np.sum(rule12.c2 * rule12.weights)) <= 1e-12

    def test_nodes(self, rule12):
        nodes = rule12.nodes
        assert nodes.shape == (12**4, 4)
        assert np.all((nodes[:, 0] > 0) & (nodes[:, 0] < 1))
        assert np.all((nodes[:, 1:] > 0) & (nodes[:, 1:] < math.pi))

    def test_outside_validity(self):
        with pytest.raises(ValueError):
            mu_rule(BiangleParams(1.0, 0.5), 8)
        with pytest.raises(ValueError):
            mu_rule(BiangleParams(1.0, 0.0), 8)


class TestProductFormula:
    def test_trivial_degree(self, rule12):
        assert product_formula_residual(P, 0, 0, (0.1, 0.4), (-0.2, 0.6), rule12) <= 1e-12

    def test_at_e(self, rule12):
        res = product_formula_residuals(P, 4, (1.0, 1.0), (1.0, 1.0), rule12)
        assert np.max(res) <= 1e-12

    def test_random_pairs(self, rule24):
        worst = 0.0
        for x, y in formula_pairs(7, 20):
            worst = max(worst, float(np.max(product_formula_residuals(P, 4, x, y, rule24))))
        assert worst <= 1e-6

    def test_other_parameters(self):
        p = BiangleParams(3.0, 1.5)
        r = mu_rule(p, 16)
        for x, y in formula_pairs(8, 5):
            assert np.max(product_formula_residuals(p, 3, x, y, r)) <= 1e-8

    def test_swapped_ordering_fails(self, rule12):
        x, y = (0.2, 0.5), (-0.3, 0.7)
        assert np.max(product_formula_residuals(P, 3, x, y, rule12, ordering="E2,F")) > 1e-2

    def test_radial_exponent_2beta_fails(self):
        r = mu_rule(P, 12, radial_exponent=2 * P.beta)
        x, y = (0.2, 0.5), (-0.3, 0.7)
        assert np.max(product_formula_residuals(P, 3, x, y, r)) > 1e-2

    def test_bad_ordering(self, rule12):
        with pytest.raises(ValueError):
            product_formula_residuals(P, 1, (0.1, 0.5), (0.1, 0.5), rule12, ordering="F")

    def test_zero_point(self, rule12):
        with pytest.raises(DegenerateError):
            product_formula_residual(P, 1, 0, (0.0, 0.0), (0.1, 0.5), rule12)

    def test_bad_index(self, rule12):
        with pytest.raises(IndexError):
            product_formula_residual(P, 1, 2, (0.1, 0.5), (0.1, 0.5), rule12)


class TestTranslation:
    def test_constant(self, rule12):
        val = translate(lambda z1, z2: np.ones_like(z1), P, BianglePoint(0.1, 0.3), BianglePoint(-0.4, 0.5), rule12)
        assert val == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("n,k", [(1, 0), (1, 1), (2, 1), (3, 3), (4, 2)])
    def test_eigenfunctions(self, rule24, n, k):
        x, y = BianglePoint(0.2, 0.3), BianglePoint(-0.4, 0.6)
        val = translate(lambda z1, z2: basis_eval(P, n, k, (z1, z2)), P, x, y, rule24)
        expected = basis_eval(P, n, k, x) * basis_eval(P, n, k, y) / basis_at_e(P, n, k)
        assert val == pytest.approx(expected, abs=1e-6)

    def test_symmetric_in_x_and_y(self, rule12):
        def f(z1, z2):
            return np.exp(z1) * z2

        x, y = BianglePoint(0.2, 0.3), BianglePoint(-0.4, 0.6)
        assert translate(f, P, x, y, rule12) == pytest.approx(translate(f, P, y, x, rule12), abs=1e-10)

    def test_cusp_rejected(self, rule12):
        with pytest.raises(DegenerateError):
            translate(lambda z1, z2: z1, P, BianglePoint(0.0, 0.0), BianglePoint(0.1, 0.5), rule12)


class TestConvolution:
    def test_against_constant(self, brule, rule12):
        def f(x1, x2):
            return x1 + x2**2

        val = convolve(f, lambda z1, z2: np.ones_like(z1), P, BianglePoint(0.1, 0.4), brule, rule12)
        assert val == pytest.approx(brule.integrate(f(brule.x1, brule.x2)), abs=1e-8)

    def test_commutative(self, brule, rule12):
        def f(x1, x2):
            return x1 * x2 - x2**2

        def g(x1, x2):
            return 1 + x1**2 + 0.5 * x2

        x = BianglePoint(-0.2, 0.5)
        assert convolve(f, g, P, x, brule, rule12) == pytest.approx(convolve(g, f, P, x, brule, rule12), abs=1e-10)

    def test_means_are_convolutions(self, brule, rule12):
        n, order = 3, CesaroOrder(1.5)

        def f(x1, x2):
            return x1**3 - x2 + 0.5 * x1 * x2

        def kern(z1, z2):
            return kernel_direct(P, order, n, (z1, z2))

        x = BianglePoint(0.3, 0.45)
        c = fourier_coeffs(f, P, n, brule)
        expected = cesaro_mean_eval(c, P, order, n, x)
        assert convolve(f, kern, P, x, brule, rule12) == pytest.approx(expected, abs=1e-9)
        assert convolve(kern, f, P, x, brule, rule12) == pytest.approx(expected, abs=1e-9)
