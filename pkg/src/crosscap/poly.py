"""Sparse multivariate polynomials over the rationals.

Coefficients are :class:`fractions.Fraction` (always reduced, positive
denominator).  Monomials are exponent tuples; the term order used
everywhere is graded reverse lexicographic with the declared variable
order (first variable largest).

Example:
    >>> p = parse_polynomial("12*y^2+z", ["x", "y", "z"])
    >>> str(differentiate(p, 1))
    '24*y'
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence, Union

Monomial = tuple  # tuple[int, ...]
Scalar = Union[int, Fraction]


class PolynomialError(ValueError):
    pass


class ParseError(PolynomialError):
    """Syntax error in polynomial text, carries the character offset."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class UnknownVariableError(PolynomialError):
    def __init__(self, name: str, position: int = -1):
        self.name = name
        self.position = position
        super().__init__(f"unknown variable {name!r}" + (f" at position {position}" if position >= 0 else ""))


@lru_cache(maxsize=None)
def degrevlex_key(exps: Monomial) -> tuple:
    """Sort key: larger key means larger monomial in degrevlex."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class Polynomial:
    """Immutable sparse polynomial ``{exponent tuple: Fraction}``."""

    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, Scalar] | None = None):
        self._vars = tuple(variables)
        n = len(self._vars)
        clean = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != n:
                    raise PolynomialError(f"monomial {exps} does not match {n} variables")
                if any(e < 0 for e in exps):
                    raise PolynomialError(f"negative exponent in {exps}")
                c = _to_fraction(c)
                if c:
                    clean[exps] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p._vars = variables
        p._terms = terms
        p._hash = None
        return p

    # construction helpers
    @classmethod
    def constant(cls, variables: Sequence[str], c: Scalar) -> "Polynomial":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls._raw(tuple(variables), {})

    @classmethod
    def variable(cls, variables: Sequence[str], index: int) -> "Polynomial":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[index] = 1
        return cls._raw(variables, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Monomial, c: Scalar = 1) -> "Polynomial":
        return cls(variables, {tuple(exps): c})

    @property
    def variables(self) -> tuple:
        return self._vars

    @property
    def nvars(self) -> int:
        return len(self._vars)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_terms(self) -> list:
        """Terms in decreasing degrevlex order (the canonical form)."""
        return sorted(self._terms.items(), key=lambda t: degrevlex_key(t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise PolynomialError("zero polynomial has no leading term")
        return max(self._terms, key=degrevlex_key)

    def leading_coefficient(self) -> Fraction:
        return self._terms[self.leading_monomial()]

    def coefficient(self, exps: Monomial) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def monic(self) -> "Polynomial":
        lc = self.leading_coefficient()
        return self._raw(self._vars, {e: c / lc for e, c in self._terms.items()})

    # arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._vars != self._vars:
                raise PolynomialError(f"variable mismatch: {self._vars} vs {other._vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self._vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return self._raw(self._vars, out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.zero(self._vars)
            return self._raw(self._vars, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._raw(self._vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise PolynomialError("only non-negative integer powers are supported")
        result = Polynomial.constant(self._vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_term(self, exps: Monomial, c: Scalar) -> "Polynomial":
        """Multiply by the single term ``c * x^exps``."""
        if not c:
            return self.zero(self._vars)
        return self._raw(
            self._vars,
            {tuple(a + b for a, b in zip(e, exps)): v * c for e, v in self._terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self._vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._vars == other._vars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._vars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({str(self)!r}, vars={list(self._vars)})"

    def __str__(self):
        return format_polynomial(self)

    def __call__(self, *point):
        return evaluate(self, point)

    def with_variables(self, variables: Sequence[str]) -> "Polynomial":
        """Re-embed into a larger (or reordered) variable list by name."""
        variables = tuple(variables)
        idx = []
        for name in self._vars:
            if name not in variables:
                raise UnknownVariableError(name)
            idx.append(variables.index(name))
        out = {}
        for e, c in self._terms.items():
            new = [0] * len(variables)
            for i, k in zip(idx, e):
                new[i] = k
            out[tuple(new)] = c
        return self._raw(variables, out)


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial) -> str:
    """Canonical text in the parser grammar, terms in decreasing degrevlex."""
    if p.is_zero():
        return "0"
    parts = []
    for exps, c in p.sorted_terms():
        factors = []
        for name, e in zip(p.variables, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(mag) + "*" + "*".join(factors)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# parser: recursive descent over
#   expr := term (('+'|'-') term)* ; term := factor ('*' factor)*
#   factor := base ('^' nat)? ; base := var | rational | '(' expr ')'
#   rational := int ('/' posint)?
# A leading unary minus is accepted on terms ("-x", "(-3)").


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.vars = tuple(variables)
        self.index = {name: i for i, name in enumerate(self.vars)}
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text):
        toks = []
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                toks.append(("int", text[i:j], i))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                toks.append(("name", text[i:j], i))
                i = j
            elif ch in "+-*/^()":
                toks.append((ch, ch, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", text, i)
        toks.append(("end", "", n))
        return toks

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {want}, found {got}", self.text, tok[2])
        self.pos += 1
        return tok

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", self.text, 0)
        p = self.expr()
        self.take("end")
        return p

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-" and self.peek()[0] != "end":
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "*":
                self.take()
                acc = acc * self.factor()
            elif tok[0] in ("int", "name", "("):
                raise ParseError("implicit multiplication is not allowed", self.text, tok[2])
            else:
                return acc

    def factor(self):
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("int")
            base = base ** int(tok[1])
        return base

    def base(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "name":
            self.take()
            if tok[1] not in self.index:
                raise UnknownVariableError(tok[1], tok[2])
            return Polynomial.variable(self.vars, self.index[tok[1]])
        if kind == "int":
            self.take()
            value = Fraction(int(tok[1]))
            if self.peek()[0] == "/":
                self.take()
                den = self.take("int")
                if int(den[1]) == 0:
                    raise ParseError("zero denominator", self.text, den[2])
                value /= int(den[1])
            return Polynomial.constant(self.vars, value)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "-":
            # unary minus inside a factor, e.g. "x*-1" or "(-x)^2" handled by expr
            self.take()
            return -self.base()
        got = "end of input" if kind == "end" else repr(tok[1])
        raise ParseError(f"unexpected {got}", self.text, tok[2])


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` into a canonical :class:`Polynomial` over ``variables``."""
    return _Parser(text, variables).parse()


# ---------------------------------------------------------------------------


def differentiate(p: Polynomial, var_index: int) -> Polynomial:
    if not 0 <= var_index < p.nvars:
        raise IndexError(f"variable index {var_index} out of range for {p.nvars} variables")
    out = {}
    for e, c in p.items():
        k = e[var_index]
        if k:
            new = list(e)
            new[var_index] = k - 1
            out[tuple(new)] = c * k
    return Polynomial._raw(p.variables, out)


def evaluate(p: Polynomial, point: Sequence):
    """Evaluate at a point of Fractions/ints (exact) or floats/complex.

    Exact inputs go through a Horner scheme on the first variable; float
    inputs use plain power sums.
    """
    point = tuple(point)
    if len(point) != p.nvars:
        raise PolynomialError(f"point has {len(point)} coordinates, expected {p.nvars}")
    if all(isinstance(v, (int, Fraction)) for v in point):
        return _horner(p.items(), [Fraction(v) for v in point], 0, p.nvars)
    total = 0.0
    for e, c in p.items():
        term = float(c)
        for v, k in zip(point, e):
            if k:
                term *= v**k
        total += term
    return total


def _horner(items, point, var, n):
    if var == n:
        return sum((c for _, c in items), Fraction(0))
    groups: dict = {}
    for e, c in items:
        groups.setdefault(e[var], []).append((e, c))
    if not groups:
        return Fraction(0)
    x = point[var]
    acc = Fraction(0)
    for k in range(max(groups), -1, -1):
        acc = acc * x
        if k in groups:
            acc += _horner(groups[k], point, var + 1, n)
    return acc


# ---------------------------------------------------------------------------


class PolynomialMap:
    """Ordered list of polynomials over a shared variable list."""

    def __init__(self, variables: Sequence[str], components: Iterable[Polynomial]):
        self.variables = tuple(variables)
        comps = []
        for c in components:
            if c.variables != self.variables:
                raise PolynomialError(f"component over {c.variables}, expected {self.variables}")
            comps.append(c)
        self.components = tuple(comps)

    @classmethod
    def parse(cls, texts: Sequence[str], variables: Sequence[str]) -> "PolynomialMap":
        return cls(variables, [parse_polynomial(t, variables) for t in texts])

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other):
        return isinstance(other, PolynomialMap) and (self.variables, self.components) == (
            other.variables,
            other.components,
        )

    def __hash__(self):
        return hash((self.variables, self.components))

    def __repr__(self):
        return f"PolynomialMap({[str(c) for c in self.components]}, vars={list(self.variables)})"

    def __call__(self, *point):
        return [evaluate(c, point) for c in self.components]

    def transformed(self, matrix: Sequence[Sequence[Scalar]]) -> "PolynomialMap":
        """Compose with a constant linear map on the target: ``A @ F``."""
        if any(len(row) != len(self) for row in matrix):
            raise PolynomialError("matrix width must equal the component count")
        out = []
        for row in matrix:
            acc = Polynomial.zero(self.variables)
            for a, comp in zip(row, self.components):
                if a:
                    acc = acc + comp * Fraction(a)
            out.append(acc)
        return PolynomialMap(self.variables, out)


class PolyMatrix:
    """Dense row-major matrix of polynomials."""

    def __init__(self, rows: int, cols: int, entries: Sequence[Polynomial]):
        if rows <= 0 or cols <= 0:
            raise PolynomialError("matrix dimensions must be positive")
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise PolynomialError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self.variables = entries[0].variables

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Polynomial]]) -> "PolyMatrix":
        rows = [list(r) for r in rows]
        return cls(len(rows), len(rows[0]), [e for r in rows for e in r])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i) -> list:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def column(self, j) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def row_transformed(self, matrix: Sequence[Sequence[Scalar]]) -> "PolyMatrix":
        out = []
        for arow in matrix:
            for j in range(self.cols):
                acc = Polynomial.zero(self.variables)
                for a, i in zip(arow, range(self.rows)):
                    if a:
                        acc = acc + self[i, j] * Fraction(a)
                out.append(acc)
        return PolyMatrix(len(matrix), self.cols, out)

    def evaluate(self, point):
        return [[evaluate(self[i, j], point) for j in range(self.cols)] for i in range(self.rows)]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and (self.rows, self.cols, self.entries) == (
            other.rows,
            other.cols,
            other.entries,
        )

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols})"


def jacobian(F: PolynomialMap) -> PolyMatrix:
    """(components x variables) matrix of first partials."""
    return PolyMatrix(
        len(F),
        F.nvars,
        [differentiate(c, j) for c in F.components for j in range(F.nvars)],
    )


def exact_divide(p: Polynomial, q: Polynomial) -> Polynomial:
    """Quotient of ``p`` by ``q`` when ``q`` divides ``p`` exactly."""
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    lm_q = q.leading_monomial()
    lc_q = q.coefficient(lm_q)
    rem = dict(p.items())
    quot = {}
    q_items = list(q.items())
    while rem:
        lm = max(rem, key=degrevlex_key)
        shift = tuple(a - b for a, b in zip(lm, lm_q))
        if any(s < 0 for s in shift):
            raise PolynomialError("division is not exact")
        c = rem[lm] / lc_q
        quot[shift] = c
        for e, v in q_items:
            t = tuple(a + b for a, b in zip(e, shift))
            s = rem.get(t, 0) - c * v
            if s:
                rem[t] = s
            else:
                rem.pop(t, None)
    return Polynomial._raw(p.variables, quot)


def determinant(M: PolyMatrix) -> Polynomial:
    """Fraction-free (Bareiss) determinant of a square polynomial matrix."""
    if M.rows != M.cols:
        raise PolynomialError("determinant of a non-square matrix")
    n = M.rows
    a = [M.row(i) for i in range(n)]
    sign = 1
    prev = Polynomial.constant(M.variables, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return Polynomial.zero(M.variables)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * pivot - a[i][k] * a[k][j]
                a[i][j] = exact_divide(num, prev) if not prev.is_constant() else num * (1 / prev.constant_term())
            a[i][k] = Polynomial.zero(M.variables)
        prev = pivot
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def minors(M: PolyMatrix, size: int) -> list:
    """All ``size``-minors, ordered lexicographically by (row set, column set).

    Uses cofactor expansion along the first chosen row with memoised
    sub-minors, so the many overlapping determinants share work.
    """
    if not 1 <= size <= min(M.rows, M.cols):
        raise PolynomialError(f"minor size {size} out of range for {M.rows}x{M.cols}")
    memo: dict = {}
    zero = Polynomial.zero(M.variables)

    def det(rows: tuple, cols: tuple) -> Polynomial:
        if len(rows) == 1:
            return M[rows[0], cols[0]]
        key = (rows, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        r0, rest = rows[0], rows[1:]
        acc = zero
        for idx, c in enumerate(cols):
            entry = M[r0, c]
            if entry.is_zero():
                continue
            sub = det(rest, cols[:idx] + cols[idx + 1 :])
            if sub.is_zero():
                continue
            term = entry * sub
            acc = acc - term if idx % 2 else acc + term
        memo[key] = acc
        return acc

    out = []
    for rows in itertools.combinations(range(M.rows), size):
        for cols in itertools.combinations(range(M.cols), size):
            out.append(det(rows, cols))
    return out


def minor_count(rows: int, cols: int, size: int) -> int:
    return comb(rows, size) * comb(cols, size)
