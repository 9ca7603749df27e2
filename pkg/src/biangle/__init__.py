"""Bivariate Jacobi polynomials on the parabolic biangle, their Cesaro means,
summability kernels and product-formula convolution."""

from .basis import (
    E_POINT,
    BiangleParams,
    BianglePoint,
    basis_at_e,
    basis_eval,
    basis_norm_g,
    basis_table,
    weight_W,
)
from .cesaro import (
    CesaroOrder,
    PoleError,
    TriangularCoeffs,
    addition_coeff_a,
    addition_formula_residual,
    cesaro_A,
    cesaro_mean_eval,
    fourier_coeffs,
    kernel_closed,
    kernel_closed_projection,
    kernel_direct,
    kernel_l1_norm,
    kernel_min,
    univariate_cesaro_kernel,
    z_arg,
)
from .jacobi1d import (
    JacobiParams,
    jacobi_eval,
    jacobi_norm_h,
    jacobi_weight,
    pochhammer,
)
from .product_formula import (
    DegenerateError,
    ProductMeasureRule,
    convolve,
    map_D,
    map_E,
    map_F,
    mu_rule,
    product_formula_residual,
    translate,
)
from .quadrature import BiangleRule, QuadratureError, QuadratureRule, biangle_rule, gauss_jacobi

__version__ = "0.1.0"
