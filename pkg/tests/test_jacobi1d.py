import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.special import eval_jacobi

from biangle import JacobiParams, gauss_jacobi, jacobi_eval, jacobi_norm_h, jacobi_weight, pochhammer
from biangle.jacobi1d import jacobi_at_one, jacobi_table, log_pochhammer

params_st = st.tuples(
    st.floats(-0.9, 5.0, allow_nan=False), st.floats(-0.9, 5.0, allow_nan=False)
).map(lambda ab: JacobiParams(*ab))


def hypergeometric_jacobi(a, b, n, t):
    """Finite 2F1(-n, n+a+b+1; a+1; (1-t)/2) sum and the sum of |terms|."""
    z = (1 - t) / 2
    terms = [
        pochhammer(-n, j) * pochhammer(n + a + b + 1, j)
        / (pochhammer(a + 1, j) * math.factorial(j)) * z**j
        for j in range(n + 1)
    ]
    scale = pochhammer(a + 1, n) / math.factorial(n)
    return scale * math.fsum(terms), scale * math.fsum(abs(v) for v in terms)


class TestPochhammer:
    def test_empty_product(self):
        assert pochhammer(2.5, 0) == 1

    def test_factorial(self):
        assert pochhammer(1, 4) == 24

    def test_half(self):
        assert pochhammer(0.5, 2) == 0.75

    def test_negative_n(self):
        with pytest.raises(ValueError):
            pochhammer(1.0, -1)

    def test_log_form_matches(self):
        for a, n in [(0.3, 5), (2.0, 7), (-2.5, 4)]:
            lv, s = log_pochhammer(a, n)
            assert_allclose(s * math.exp(lv), pochhammer(a, n), rtol=1e-13)

    def test_log_form_zero(self):
        assert log_pochhammer(-2.0, 4)[1] == 0.0


class TestJacobiEval:
    def test_degree_zero(self):
        assert jacobi_eval(JacobiParams(1.3, 0.2), 0, 0.37) == 1.0

    @pytest.mark.parametrize("n", [0, 1, 2, 5, 11])
    def test_value_at_one(self, n):
        p = JacobiParams(0.7, 1.9)
        assert_allclose(jacobi_eval(p, n, 1.0), pochhammer(1.7, n) / math.factorial(n), rtol=1e-13)
        assert_allclose(jacobi_at_one(0.7, n), pochhammer(1.7, n) / math.factorial(n), rtol=1e-13)

    @given(params_st, st.floats(-1, 1))
    def test_degree_one(self, p, t):
        expected = ((p.alpha + p.beta + 2) * t + (p.alpha - p.beta)) / 2
        assert_allclose(jacobi_eval(p, 1, t), expected, rtol=1e-13, atol=1e-13)

    @given(params_st, st.integers(0, 10), st.floats(-1, 1))
    def test_matches_hypergeometric_sum(self, p, n, t):
        expected, magnitude = hypergeometric_jacobi(p.alpha, p.beta, n, t)
        # the alternating sum cancels; its rounding error scales with magnitude
        assert_allclose(jacobi_eval(p, n, t), expected, rtol=1e-9, atol=1e-12 * magnitude)

    def test_matches_scipy(self):
        t = np.linspace(-1, 1, 41)
        for a, b in [(0.0, 0.0), (0.5, -0.5), (2.5, 1.0)]:
            for n in (3, 17, 40):
                assert_allclose(
                    jacobi_eval(JacobiParams(a, b), n, t), eval_jacobi(n, a, b, t), rtol=1e-10, atol=1e-10
                )

    @given(params_st, st.integers(0, 12), st.floats(-1, 1))
    def test_reflection_symmetry(self, p, n, t):
        swapped = JacobiParams(p.beta, p.alpha)
        assert_allclose(jacobi_eval(p, n, -t), (-1) ** n * jacobi_eval(swapped, n, t), rtol=1e-10, atol=1e-10)

    def test_array_and_clamp(self):
        p = JacobiParams(0.5, 0.5)
        out = jacobi_eval(p, 3, np.array([-1 - 1e-13, 0.0, 1 + 1e-13]))
        assert out.shape == (3,)
        assert_allclose(out[2], jacobi_at_one(0.5, 3))

    def test_out_of_interval(self):
        with pytest.raises(ValueError):
            jacobi_eval(JacobiParams(0, 0), 2, 1.01)

    def test_bad_degree(self):
        with pytest.raises(ValueError):
            jacobi_eval(JacobiParams(0, 0), -1, 0.0)
        with pytest.raises(ValueError):
            jacobi_eval(JacobiParams(0, 0), 10**7, 0.0)

    def test_bad_params(self):
        with pytest.raises(ValueError):
            JacobiParams(-1.0, 0.0)

    def test_table_rows(self):
        t = np.linspace(-1, 1, 7)
        table = jacobi_table(1.5, 0.25, 6, t)
        for n in range(7):
            assert_allclose(table[n], jacobi_eval(JacobiParams(1.5, 0.25), n, t), rtol=1e-14)


class TestWeightAndNorm:
    def test_uniform(self):
        assert_allclose(jacobi_weight(JacobiParams(0, 0), 0.3), 0.5)

    def test_alpha_one(self):
        assert_allclose(jacobi_weight(JacobiParams(1, 0), 0.0), 0.5)

    @pytest.mark.parametrize("a,b", [(0.0, 0.0), (2.0, 0.5), (-0.5, 3.0)])
    def test_weight_integrates_to_one(self, a, b):
        # plain Legendre is exact only for polynomial densities
        t, w = np.polynomial.legendre.leggauss(400)
        if float(a).is_integer() and float(b).is_integer():
            assert_allclose(np.sum(jacobi_weight(JacobiParams(a, b), t) * w), 1.0, rtol=1e-12)
        rule = gauss_jacobi(JacobiParams(a, b), 40)
        assert_allclose(rule.weights.sum(), 1.0, rtol=1e-12)

    def test_singular_endpoint(self):
        with pytest.raises(ValueError):
            jacobi_weight(JacobiParams(-0.5, 0), 1.0)

    def test_h0(self):
        assert jacobi_norm_h(JacobiParams(3.1, 0.4), 0) == 1.0

    def test_legendre_h1(self):
        assert_allclose(jacobi_norm_h(JacobiParams(0, 0), 1), 1 / 3, rtol=1e-15)

    def test_h3_against_quadrature(self):
        p = JacobiParams(1, 0.5)
        rule = gauss_jacobi(p, 40)
        quad = rule.integrate(jacobi_eval(p, 3, rule.nodes) ** 2)
        assert_allclose(jacobi_norm_h(p, 3), quad, rtol=1e-12)

    @settings(max_examples=40)
    @given(params_st, st.integers(0, 20))
    def test_h_against_quadrature(self, p, n):
        rule = gauss_jacobi(p, 40)
        quad = rule.integrate(jacobi_eval(p, n, rule.nodes) ** 2)
        assert_allclose(jacobi_norm_h(p, n), quad, rtol=1e-10)

    @pytest.mark.parametrize("a", [0.0, 0.5, 1.0, 2.5])
    @pytest.mark.parametrize("b", [0.0, 0.5, 1.0, 2.5])
    def test_orthogonality(self, a, b):
        p = JacobiParams(a, b)
        rule = gauss_jacobi(p, 30)
        table = jacobi_table(a, b, 12, rule.nodes)
        gram = (table * rule.weights) @ table.T
        h = np.array([jacobi_norm_h(p, n) for n in range(13)])
        assert_allclose(gram, np.diag(h), atol=1e-12)
