"""Multiplication matrices, the trace functional and trace quadratic forms.

For ``A = Q[x]/I`` with staircase basis ``b_0 = 1, b_1, ...`` the trace
form of a weight ``h`` is the symmetric matrix ``T(h * b_i * b_j)``, where
``T`` is the trace of multiplication on ``A``.  Its signature counts the
real points of ``V(I)`` weighted by the sign of ``h``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .groebner import QuotientAlgebra
from .linalg import charpoly_berkowitz, inertia_from_charpoly, integer_scaled
from .poly import Polynomial


class TrivialAlgebraError(ValueError):
    """Operation needs a non-zero quotient algebra."""


class NotSymmetricError(ValueError):
    pass


@dataclass(frozen=True)
class MultiplicationMatrix:
    element: Polynomial
    matrix: tuple  # tuple of row tuples

    def __len__(self):
        return len(self.matrix)


@dataclass(frozen=True)
class TraceForm:
    weight: Polynomial
    gram: tuple
    inertia: tuple

    @property
    def signature(self) -> int:
        return self.inertia[0] - self.inertia[1]

    @property
    def nondegenerate(self) -> bool:
        return self.inertia[2] == 0

    @property
    def dimension(self) -> int:
        return len(self.gram)


def _columns(h_vec: Sequence, qa: QuotientAlgebra) -> list:
    """Columns of multiplication by the element with coordinates ``h_vec``."""
    D = qa.dimension
    table = qa.product_table
    cols = []
    for j in range(D):
        col = [Fraction(0)] * D
        for a, ha in enumerate(h_vec):
            if ha:
                for k, c in table[a][j].items():
                    col[k] += ha * c
        cols.append(col)
    return cols


def multiplication_matrix(h: Polynomial, qa: QuotientAlgebra) -> MultiplicationMatrix:
    """Matrix of ``a -> h*a`` on the staircase basis (column j = h*b_j)."""
    if qa.dimension == 0:
        raise TrivialAlgebraError("quotient algebra is zero: I is the unit ideal")
    cols = _columns(qa.coords(h), qa)
    D = qa.dimension
    return MultiplicationMatrix(h, tuple(tuple(cols[j][i] for j in range(D)) for i in range(D)))


def trace(h: Polynomial, qa: QuotientAlgebra) -> Fraction:
    if qa.dimension == 0:
        return Fraction(0)
    tv = qa.trace_vector
    return sum((c * t for c, t in zip(qa.coords(h), tv)), Fraction(0))


def hermite_matrix(qa: QuotientAlgebra) -> list:
    """Gram matrix of the weight-1 trace form, T(b_i*b_j)."""
    return [list(r) for r in qa.hermite]


def gram_matrix(h: Polynomial | Sequence, qa: QuotientAlgebra) -> list:
    """``T(h*b_i*b_j)`` for all i, j.

    ``h`` may be a polynomial or a coordinate vector in ``qa``.  Uses
    T(h*b_i*b_j) = sum_a h_a * T(b_a * (b_i*b_j)), i.e. ``w . table[i][j]``
    with ``w = H @ h`` and H the weight-1 Gram matrix.
    """
    D = qa.dimension
    if D == 0:
        return []
    h_vec = qa.coords(h) if isinstance(h, Polynomial) else list(h)
    H = qa.hermite
    w = [sum((H[k][a] * ha for a, ha in enumerate(h_vec) if ha), Fraction(0)) for k in range(D)]
    table = qa.product_table
    G = [[Fraction(0)] * D for _ in range(D)]
    for i in range(D):
        for j in range(i, D):
            v = sum((w[k] * c for k, c in table[i][j].items()), Fraction(0))
            G[i][j] = G[j][i] = v
    return G


def signature(gram: Sequence[Sequence]) -> tuple:
    """Exact inertia ``(n_plus, n_minus, n_zero)`` of a symmetric rational matrix.

    Clears denominators (a positive scaling keeps the inertia), takes the
    division-free characteristic polynomial and counts sign variations.
    """
    n = len(gram)
    for i in range(n):
        if len(gram[i]) != n:
            raise NotSymmetricError("matrix is not square")
        for j in range(i):
            if Fraction(gram[i][j]) != Fraction(gram[j][i]):
                raise NotSymmetricError(f"matrix is not symmetric at ({i}, {j})")
    if n == 0:
        return (0, 0, 0)
    return inertia_from_charpoly(charpoly_berkowitz(integer_scaled(gram)))


def trace_quadratic_form(h: Polynomial, qa: QuotientAlgebra) -> TraceForm:
    """The form ``a -> T(h*a^2)`` with its Gram matrix and inertia."""
    G = gram_matrix(h, qa)
    return TraceForm(h, tuple(tuple(r) for r in G), signature(G))
