"""Exact dense linear algebra over Q used by the algebraic layers."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


class RowEchelon:
    """Incrementally maintained row-echelon form for exact rank tests."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict = {}  # pivot column -> row normalised to 1 at pivot

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, vec: Sequence) -> bool:
        """Insert a vector; return True if it increased the rank."""
        v = [Fraction(x) for x in vec]
        for col in sorted(self.rows):
            c = v[col]
            if c:
                row = self.rows[col]
                for k in range(col, self.ncols):
                    if row[k]:
                        v[k] -= c * row[k]
        pivot = next((k for k, x in enumerate(v) if x), None)
        if pivot is None:
            return False
        inv = 1 / v[pivot]
        self.rows[pivot] = [x * inv for x in v]
        return True


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    ech = RowEchelon(len(rows[0]))
    for r in rows:
        ech.add(r)
    return ech.rank


def integer_scaled(matrix: Sequence[Sequence]) -> list:
    """Multiply a rational matrix by the positive lcm of its denominators."""
    den = 1
    for row in matrix:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    return [[int(Fraction(x) * den) for x in row] for row in matrix]


def charpoly_berkowitz(matrix: Sequence[Sequence]) -> list:
    """Characteristic polynomial det(t*I - A), division free.

    Returns coefficients from the leading one down: ``[1, c1, ..., cn]``.
    Works over any commutative ring; used here with Python ints.
    """
    n = len(matrix)
    if n == 0:
        return [1]
    A = [list(r) for r in matrix]
    # Berkowitz: build the Toeplitz vectors for leading principal submatrices
    poly = [1, -A[0][0]]
    for r in range(1, n):
        # A_r = [[M, C], [R, a]] with M the leading r x r block
        R = A[r][:r]
        C = [A[i][r] for i in range(r)]
        a = A[r][r]
        M = [row[:r] for row in A[:r]]
        # q = (1, -a, -R C, -R M C, ..., -R M^{r-1} C)
        q = [1, -a]
        vec = C
        for _ in range(r):
            q.append(-sum(x * y for x, y in zip(R, vec)))
            vec = [sum(M[i][k] * vec[k] for k in range(r)) for i in range(r)]
        # new poly = T(q) * poly, T lower-triangular Toeplitz of size (r+2) x (r+1)
        new = []
        for i in range(r + 2):
            s = 0
            for j in range(min(i, r) + 1):
                if i - j < len(q):
                    s += q[i - j] * poly[j]
            new.append(s)
        poly = new
    return poly


def sign_changes(seq: Sequence) -> int:
    signs = [1 if x > 0 else -1 for x in seq if x]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def inertia_from_charpoly(coeffs: Sequence) -> tuple:
    """(n_plus, n_minus, n_zero) for a polynomial with only real roots.

    ``coeffs`` run from the leading coefficient down.  Descartes' rule is
    exact when every root is real.
    """
    n = len(coeffs) - 1
    n_zero = 0
    for c in reversed(coeffs):
        if c:
            break
        n_zero += 1
    core = list(coeffs[: len(coeffs) - n_zero])
    n_plus = sign_changes(core)
    deg = len(core) - 1
    # p(-t): flip sign of coefficients of odd powers
    flipped = [c if (deg - i) % 2 == 0 else -c for i, c in enumerate(core)]
    n_minus = sign_changes(flipped)
    if n_plus + n_minus + n_zero != n:
        raise ArithmeticError("characteristic polynomial has non-real roots; matrix not symmetric?")
    return n_plus, n_minus, n_zero


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def transpose(A):
    return [list(r) for r in zip(*A)]


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by Gaussian elimination over Q."""
    A = [[Fraction(x) for x in row] for row in matrix]
    n = len(A)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        p = A[k][k]
        det *= p
        for i in range(k + 1, n):
            f = A[i][k] / p
            if f:
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
    return det
