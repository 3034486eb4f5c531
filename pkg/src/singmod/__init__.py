"""Numerical toolkit around class groups of imaginary quadratic fields,
heights of singular moduli, and Dirichlet L-values at s = 1."""

from .precision import DOUBLE, EXTENDED, PrecisionContext
from .quadforms import (
    ClassData,
    Discriminant,
    HeegnerPoint,
    QuadForm,
    heegner_points,
    is_fundamental,
    kronecker_chi,
    principal_form,
    reduced_forms,
)
from .modfunc import (
    JCoefficientTable,
    eta,
    j_coefficients,
    j_invariant,
    log_abs_j_stable,
    reduce_to_F,
    u_function,
    weber_gamma2_gamma3,
)
from .heights import ConjugateSet, height_algebraic_integer, height_j, height_j_approx, height_rational
from .lfunctions import (
    L_one,
    L_prime_over_L_klf,
    L_prime_over_L_series,
    LValueResult,
    eisenstein_E,
    eisenstein_laurent_check,
    hurwitz_zeta,
    kronecker_limits,
)
from .constants import ConstantReport, constant_C, kappa1, kappa2, kappa3

__version__ = "0.1.0"
