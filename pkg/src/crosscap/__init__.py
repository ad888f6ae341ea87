"""Counting and sign-classifying cross-caps of polynomial maps R^m -> R^(2m-1).

Exact layers (polynomials, Groebner bases, trace forms) decide counts and
signed counts; a floating-point oracle locates the points for checking.
"""

from .engine import (
    BoundaryHit,
    CrossCapError,
    CrossCapProblem,
    DegenerateForm,
    GenericityReport,
    HypothesisFailure,
    NotImmersion,
    ParityError,
    Region,
    ShapeError,
    TotalZeta,
    ZetaResult,
    augmented_map,
    build_delta,
    build_problem,
    check_generic,
    count_real,
    immersion_check,
    intersection_difference,
    intersection_number,
    omega,
    total_zeta,
    zeta,
)
from .groebner import (
    GroebnerBasis,
    InfiniteDimensionError,
    QuotientAlgebra,
    is_unit_ideal,
    normal_form,
    quotient_basis,
    reduced_groebner,
)
from .oracle import classify_all, crosscap_sign_at, solve_singular_points
from .poly import (
    ParseError,
    PolyMatrix,
    Polynomial,
    PolynomialMap,
    UnknownVariableError,
    differentiate,
    evaluate,
    jacobian,
    minors,
    parse_polynomial,
)
from .trace_form import (
    hermite_matrix,
    multiplication_matrix,
    signature,
    trace,
    trace_quadratic_form,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
