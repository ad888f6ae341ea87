"""Counting and sign-classifying cross-caps of polynomial maps R^m -> R^(2m-1).

The signed count over a region ``{u >= 0}`` is minus half the sum of the
signatures of the trace forms weighted by ``delta`` and ``u*delta`` on the
quotient by the ideal of maximal minors of Df.  ``delta`` is the Jacobian
determinant of the bordered minors built on a pivot block of Df.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import oracle
from .groebner import (
    GroebnerBasis,
    InfiniteDimensionError,
    QuotientAlgebra,
    is_unit_ideal,
    quotient_basis,
    reduced_groebner,
)
from .poly import (
    Polynomial,
    PolyMatrix,
    PolynomialMap,
    determinant,
    differentiate,
    jacobian,
    minors,
)
from .trace_form import TraceForm, signature, gram_matrix

log = logging.getLogger(__name__)

DEFAULT_MAX_RETRIES = 8
TOL_BOUNDARY = 1e-8


class CrossCapError(Exception):
    code = "error"


class ShapeError(CrossCapError, ValueError):
    code = "shape"


class HypothesisFailure(CrossCapError):
    code = "hypothesis"

    def __init__(self, hypothesis: str, retries: int, message: str = ""):
        self.hypothesis = hypothesis
        self.retries = retries
        super().__init__(message or f"hypothesis {hypothesis!r} failed after {retries} retries")


class DegenerateForm(CrossCapError):
    code = "degenerate_form"

    def __init__(self, form: str, inertia: tuple):
        self.form = form
        self.inertia = inertia
        super().__init__(
            f"trace form {form} is degenerate (inertia {inertia}); a singular point probably lies "
            "on the region boundary, try perturbing the radius"
        )


class BoundaryHit(CrossCapError):
    code = "boundary_hit"

    def __init__(self, point, value: float):
        self.point = point
        self.value = value
        super().__init__(f"singular point {point} lies on the region boundary (u = {value:.3e})")


class ParityError(CrossCapError):
    code = "parity"


class NotImmersion(CrossCapError):
    code = "not_immersion"

    def __init__(self, radius_squared, witness=None):
        self.radius_squared = radius_squared
        self.witness = witness
        msg = f"g restricted to the sphere of radius^2 {radius_squared} is not an immersion"
        if witness is not None:
            msg += f"; rank drops at {tuple(witness)}"
        super().__init__(msg)


# ---------------------------------------------------------------------------


def omega(variables: Sequence[str]) -> Polynomial:
    """Sum of squares of the coordinates."""
    n = len(variables)
    return Polynomial(variables, {tuple(2 if i == j else 0 for j in range(n)): 1 for i in range(n)})


@dataclass(frozen=True)
class Region:
    """Compact region ``{u >= 0}``."""

    u: Polynomial
    kind: str = "custom"
    params: tuple = ()

    @classmethod
    def ball(cls, variables: Sequence[str], radius_squared) -> "Region":
        r2 = Fraction(radius_squared)
        if r2 <= 0:
            raise ValueError("radius^2 must be positive")
        return cls(r2 - omega(variables), "ball", (r2,))

    @classmethod
    def annulus(cls, variables: Sequence[str], r1_squared, r2_squared) -> "Region":
        a, b = Fraction(r1_squared), Fraction(r2_squared)
        if not 0 < a < b:
            raise ValueError("annulus needs 0 < r1^2 < r2^2")
        w = omega(variables)
        return cls((w - a) * (b - w), "annulus", (a, b))

    @classmethod
    def custom(cls, u: Polynomial) -> "Region":
        return cls(u, "custom", ())

    def contains(self, point) -> bool:
        return float(self.u(*point)) > 0


# ---------------------------------------------------------------------------


class CrossCapProblem:
    """A map f: R^m -> R^(2m-1) with its singular ideal and quotient algebra."""

    def __init__(self, f: PolynomialMap):
        m = f.nvars
        if m < 3 or m % 2 == 0:
            raise ShapeError(f"need an odd number m >= 3 of variables, got {m}")
        if len(f) != 2 * m - 1:
            raise ShapeError(f"need 2m-1 = {2 * m - 1} components for m = {m}, got {len(f)}")
        self.f = f
        self.m = m
        self.Df: PolyMatrix = jacobian(f)
        self.mu = PolynomialMap(f.variables, minors(self.Df, m))
        nonzero = [p for p in self.mu if not p.is_zero()]
        self.singular_gb: GroebnerBasis = reduced_groebner(nonzero, f.variables)
        self.qa: QuotientAlgebra = quotient_basis(self.singular_gb)
        self._points: dict = {}

    @property
    def variables(self) -> tuple:
        return self.f.variables

    @property
    def dim_A(self) -> int:
        return self.qa.dimension

    def points(self, seed: int = 0, tol_residual=oracle.TOL_RESIDUAL, tol_dedup=oracle.TOL_DEDUP) -> list:
        """Approximate real singular points (cached per seed and tolerances)."""
        key = (seed, tol_residual, tol_dedup)
        if key not in self._points:
            self._points[key] = oracle.solve_singular_points(
                self.qa, list(self.mu), seed, tol_residual, tol_dedup, f=self.f
            )
        return self._points[key]


def build_problem(f: PolynomialMap) -> CrossCapProblem:
    return CrossCapProblem(f)


# ---------------------------------------------------------------------------
# genericity


@dataclass
class PointVerdict:
    coordinates: tuple
    rank_Df: int
    rank_Dmu: int
    crosscap: bool
    residual: float


@dataclass
class GenericityReport:
    generic: bool
    no_corank_two: bool
    transversal: bool
    dim_A: int
    points: list = field(default_factory=list)
    witness: tuple | None = None

    def as_dict(self) -> dict:
        return {
            "generic": self.generic,
            "exact": {"no_corank_two": self.no_corank_two, "transversal": self.transversal},
            "dim_A": self.dim_A,
            "points": [
                {
                    "coords": list(p.coordinates),
                    "rank_Df": p.rank_Df,
                    "rank_Dmu": p.rank_Dmu,
                    "crosscap": p.crosscap,
                    "residual": p.residual,
                }
                for p in self.points
            ],
            "witness": list(self.witness) if self.witness is not None else None,
        }


def _numeric_rank(M: np.ndarray, rtol: float = 1e-7) -> int:
    sv = np.linalg.svd(M, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rtol * max(1.0, sv[0])))


def check_generic(p: CrossCapProblem, seed: int = 0) -> GenericityReport:
    """Decide whether every real singular point of f is a cross-cap.

    Exact checks over C: the corank-two locus (I + (m-1)-minors) is empty,
    and rank Dmu = m on V(I), which for a zero-dimensional ideal is the
    same as I being radical, i.e. the weight-1 trace form is non-degenerate.
    If either fails, the real singular points are tested numerically.
    """
    qa = p.qa
    m = p.m
    if qa.dimension == 0:
        return GenericityReport(True, True, True, 0)
    no_corank_two = qa.contains_unit(minors(p.Df, m - 1))
    transversal = signature(qa.hermite)[2] == 0
    if no_corank_two and transversal:
        return GenericityReport(True, True, True, qa.dimension)

    points = p.points(seed)
    Dmu = oracle.FloatJacobian(list(p.mu))
    Df = oracle.FloatJacobian(list(p.f))
    verdicts = []
    witness = None
    for pt in points:
        x = np.array(pt.coordinates)
        r1 = _numeric_rank(Df(x))
        r2 = _numeric_rank(Dmu(x))
        ok = r1 == m - 1 and r2 == m
        verdicts.append(PointVerdict(pt.coordinates, r1, r2, ok, pt.residual))
        if not ok and witness is None:
            witness = pt.coordinates
    generic = witness is None
    return GenericityReport(generic, no_corank_two, transversal, qa.dimension, verdicts, witness)


# ---------------------------------------------------------------------------
# delta data


def identity_matrix(n: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def random_unimodular(n: int, rng: random.Random, spread: int = 2) -> tuple:
    """Random integer matrix with determinant +1."""
    L = [[(1 if i == j else (rng.randint(-spread, spread) if j < i else 0)) for j in range(n)] for i in range(n)]
    U = [[(1 if i == j else (rng.randint(-spread, spread) if j > i else 0)) for j in range(n)] for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    LU = [[sum(L[i][k] * U[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    A = [LU[perm[i]] for i in range(n)]
    # permutation parity fixes the sign
    inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
    if inversions % 2:
        A[0] = [-x for x in A[0]]
    return tuple(tuple(r) for r in A)


@dataclass(frozen=True)
class DeltaData:
    pivot_minor: Polynomial
    deltas: tuple
    row_transform: tuple
    delta_jacobian: PolyMatrix = field(repr=False, compare=False)
    column_transform: tuple | None = None

    @cached_property
    def delta(self) -> Polynomial:
        """Jacobian determinant of the bordered minors (explicit polynomial)."""
        return determinant(self.delta_jacobian)


def build_delta(
    p: CrossCapProblem,
    row_transform: Sequence[Sequence[int]] | None = None,
    column_transform: Sequence[Sequence[int]] | None = None,
) -> DeltaData:
    """Pivot minor, bordered minors and their Jacobian for ``A @ Df @ C``.

    Rows 1..k-1 (k = m) of the transformed Jacobian form the pivot block;
    the pivot minor uses its columns 2..k, each bordered minor appends one
    further row i = k..2m-1 and takes all columns.  ``C`` (det +1) mixes
    the columns; it is needed when the kernel of Df at a singular point is
    orthogonal to the first coordinate axis.
    """
    n = 2 * p.m - 1
    k = p.m
    A = identity_matrix(n) if row_transform is None else tuple(tuple(r) for r in row_transform)
    J = p.Df if row_transform is None else p.Df.row_transformed(A)
    C = None
    if column_transform is not None:
        C = tuple(tuple(r) for r in column_transform)
        J = PolyMatrix.from_rows(
            [
                [
                    sum((J[i, a] * Fraction(C[a][b]) for a in range(k) if C[a][b]), Polynomial.zero(p.variables))
                    for b in range(k)
                ]
                for i in range(n)
            ]
        )
    top = list(range(k - 1))
    pivot = determinant(J.submatrix(top, list(range(1, k))))
    deltas = tuple(determinant(J.submatrix(top + [i], list(range(k)))) for i in range(k - 1, n))
    dj = jacobian(PolynomialMap(p.variables, deltas))
    return DeltaData(pivot, deltas, A, dj, C)


def _det_in_algebra(entries: list, qa: QuotientAlgebra) -> list:
    """Determinant of a square matrix of algebra elements (coordinate vectors).

    Cofactor expansion along rows with memoised column subsets; all
    products are taken in the quotient algebra.
    """
    n = len(entries)
    memo: dict = {}
    D = qa.dimension

    def rec(row: int, cols: tuple) -> list:
        if row == n:
            out = [Fraction(0)] * D
            out[0] = Fraction(1)  # basis[0] is 1
            return out
        hit = memo.get(cols)
        if hit is not None:
            return hit
        acc = [Fraction(0)] * D
        for idx, c in enumerate(cols):
            e = entries[row][c]
            if not any(e):
                continue
            sub = rec(row + 1, cols[:idx] + cols[idx + 1 :])
            if not any(sub):
                continue
            prod = qa.multiply(e, sub)
            if idx % 2:
                acc = [a - b for a, b in zip(acc, prod)]
            else:
                acc = [a + b for a, b in zip(acc, prod)]
        memo[cols] = acc
        return acc

    return rec(0, tuple(range(n)))


def delta_coordinates(dd: DeltaData, qa: QuotientAlgebra) -> list:
    """Coordinates of delta in the quotient algebra, without expanding delta."""
    J = dd.delta_jacobian
    entries = [[qa.coords(J[i, j]) for j in range(J.cols)] for i in range(J.rows)]
    return _det_in_algebra(entries, qa)


# ---------------------------------------------------------------------------
# zeta


@dataclass
class ZetaResult:
    zeta: int
    sig_delta: int
    sig_u_delta: int
    dim_A: int
    retries_used: int
    hypotheses: dict
    inertia_delta: tuple = (0, 0, 0)
    inertia_u_delta: tuple = (0, 0, 0)
    row_transform: tuple | None = None
    column_transform: tuple | None = None


def zeta(
    p: CrossCapProblem,
    region: Region,
    seed: int = 0,
    max_retries: int = DEFAULT_MAX_RETRIES,
    boundary_check: bool = True,
    tol_boundary: float = TOL_BOUNDARY,
) -> ZetaResult:
    """Signed number of cross-caps of f inside ``region``."""
    qa = p.qa
    hyp = {
        "finite_dimension": True,
        "unit_pivot": None,
        "theta_delta_nondegenerate": None,
        "theta_u_delta_nondegenerate": None,
        "boundary_regular": None,
    }
    if qa.dimension == 0:
        hyp.update(unit_pivot=True, theta_delta_nondegenerate=True, theta_u_delta_nondegenerate=True, boundary_regular=True)
        return ZetaResult(0, 0, 0, 0, 0, hyp)

    rng = random.Random(seed)
    n = 2 * p.m - 1
    transform = None
    column = None
    retries = 0
    while True:
        dd = build_delta(p, transform, column)
        ext = reduced_groebner(list(p.singular_gb.generators) + [dd.pivot_minor])
        if is_unit_ideal(ext):
            break
        if retries >= max_retries:
            hyp["unit_pivot"] = False
            raise HypothesisFailure("unit_pivot", retries, f"1 is not in I + <pivot minor> after {retries} retries")
        retries += 1
        transform = random_unimodular(n, rng)
        column = random_unimodular(p.m, rng)
        log.debug("pivot hypothesis failed, retry %d with transforms %s, %s", retries, transform, column)
    hyp["unit_pivot"] = True

    d_vec = delta_coordinates(dd, qa)
    u_vec = qa.coords(region.u)
    ud_vec = qa.multiply(u_vec, d_vec)
    inertia_d = signature(gram_matrix(d_vec, qa))
    inertia_ud = signature(gram_matrix(ud_vec, qa))
    hyp["theta_delta_nondegenerate"] = inertia_d[2] == 0
    hyp["theta_u_delta_nondegenerate"] = inertia_ud[2] == 0
    if inertia_d[2]:
        raise DegenerateForm("theta_delta", inertia_d)
    if inertia_ud[2]:
        raise DegenerateForm("theta_u_delta", inertia_ud)

    sig_d = inertia_d[0] - inertia_d[1]
    sig_ud = inertia_ud[0] - inertia_ud[1]
    if (sig_d + sig_ud) % 2:
        raise ParityError(f"signature sum {sig_d} + {sig_ud} is odd")

    if boundary_check:
        ev = oracle.FloatSystem([region.u])
        ok = True
        for pt in p.points(seed):
            val = float(ev(np.array(pt.coordinates))[0])
            scale = max(1.0, float(ev.scale(np.array(pt.coordinates))[0]))
            if abs(val) < tol_boundary * scale:
                hyp["boundary_regular"] = False
                raise BoundaryHit(pt.coordinates, val)
        hyp["boundary_regular"] = ok

    return ZetaResult(
        -(sig_d + sig_ud) // 2,
        sig_d,
        sig_ud,
        qa.dimension,
        retries,
        hyp,
        inertia_d,
        inertia_ud,
        dd.row_transform,
        dd.column_transform,
    )


def count_real(p: CrossCapProblem) -> int:
    """Number of distinct real points of V(I): signature of the weight-1 form."""
    if p.qa.dimension == 0:
        return 0
    n_plus, n_minus, _ = signature(p.qa.hermite)
    return n_plus - n_minus


def large_radius_squared(points: Sequence) -> int:
    """(ceil(max point norm) + 1)^2, or 1 when there are no points."""
    if not points:
        return 1
    r = max(math.sqrt(sum(c * c for c in pt.coordinates)) for pt in points)
    return (math.ceil(r) + 1) ** 2


@dataclass
class TotalZeta:
    zeta_total: int
    positives: int
    negatives: int
    count: int
    radius_squared: int
    result: ZetaResult

    def as_tuple(self) -> tuple:
        return (self.zeta_total, self.positives, self.negatives)


def total_zeta(p: CrossCapProblem, seed: int = 0, max_retries: int = DEFAULT_MAX_RETRIES) -> TotalZeta:
    """Signed count over all of R^m, with the positive/negative split."""
    count = count_real(p)
    r2 = large_radius_squared(p.points(seed))
    res = zeta(p, Region.ball(p.variables, r2), seed, max_retries)
    if (count + res.zeta) % 2:
        raise ParityError(f"count {count} and zeta {res.zeta} have different parity")
    pos = (count + res.zeta) // 2
    return TotalZeta(res.zeta, pos, count - pos, count, r2, res)


# ---------------------------------------------------------------------------
# immersions of spheres


def augmented_map(g: PolynomialMap) -> PolynomialMap:
    """(omega, g): R^m -> R^(2m-1)."""
    m = g.nvars
    if m < 3 or m % 2 == 0:
        raise ShapeError(f"need an odd number m >= 3 of variables, got {m}")
    if len(g) != 2 * m - 2:
        raise ShapeError(f"need 2m-2 = {2 * m - 2} components for m = {m}, got {len(g)}")
    return PolynomialMap(g.variables, (omega(g.variables),) + tuple(g.components))


@dataclass
class ImmersionCheck:
    immersion: bool
    exact: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.immersion


def immersion_check(g: PolynomialMap, radius_squared, seed: int = 0) -> ImmersionCheck:
    """Whether g restricted to the sphere omega = r^2 is an immersion.

    Exact sufficient test: no complex point of the sphere has rank
    D(omega, g) < m.  Otherwise the real points of that locus are located
    numerically; any one of them is a witness.
    """
    h = augmented_map(g)
    r2 = Fraction(radius_squared)
    mu = minors(jacobian(h), g.nvars)
    sphere = omega(g.variables) - r2
    gens = [q for q in mu if not q.is_zero()] + [sphere]
    gb = reduced_groebner(gens)
    if is_unit_ideal(gb):
        return ImmersionCheck(True, True)
    try:
        qa = quotient_basis(gb)
    except InfiniteDimensionError:
        raise NotImmersion(r2) from None
    pts = oracle.solve_singular_points(qa, gens, seed)
    if pts:
        return ImmersionCheck(False, False, pts[0].coordinates)
    return ImmersionCheck(True, False)


def intersection_number(
    g: PolynomialMap,
    radius_squared,
    seed: int = 0,
    max_retries: int = DEFAULT_MAX_RETRIES,
    problem: CrossCapProblem | None = None,
) -> int:
    chk = immersion_check(g, radius_squared, seed)
    if not chk:
        raise NotImmersion(Fraction(radius_squared), chk.witness)
    p = problem or build_problem(augmented_map(g))
    return zeta(p, Region.ball(g.variables, radius_squared), seed, max_retries).zeta


def intersection_difference(
    g: PolynomialMap,
    r1_squared,
    r2_squared,
    seed: int = 0,
    max_retries: int = DEFAULT_MAX_RETRIES,
    problem: CrossCapProblem | None = None,
) -> int:
    for r2 in (r1_squared, r2_squared):
        chk = immersion_check(g, r2, seed)
        if not chk:
            raise NotImmersion(Fraction(r2), chk.witness)
    p = problem or build_problem(augmented_map(g))
    return zeta(p, Region.annulus(g.variables, r1_squared, r2_squared), seed, max_retries).zeta
