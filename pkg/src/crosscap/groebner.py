"""Reduced Groebner bases over Q (degrevlex) and zero-dimensional quotients.

Buchberger's algorithm with the Gebauer-Moeller pair criteria and the
normal selection strategy (smallest lcm first, sugar degree as tiebreak).
Every basis element is kept monic, so the final inter-reduced basis is the
unique reduced Groebner basis of the ideal.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .poly import Polynomial, PolynomialError, degrevlex_key

ORDER = "degrevlex"


class InfiniteDimensionError(ArithmeticError):
    """The quotient algebra is infinite dimensional (V(I) not finite)."""


def _neg_key(e):
    # heapq pops the smallest item; this pops the degrevlex-largest monomial
    return (-sum(e), e[::-1])


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class _Elem:
    """Monic basis element in working form."""

    __slots__ = ("lm", "tail", "sugar")

    def __init__(self, terms: dict, sugar: int):
        lm = max(terms, key=degrevlex_key)
        lc = terms[lm]
        self.lm = lm
        self.tail = [(e, c / lc) for e, c in terms.items() if e != lm]
        self.sugar = sugar

    def as_dict(self) -> dict:
        d = dict(self.tail)
        d[self.lm] = Fraction(1)
        return d


def _reduce(terms: dict, basis: Sequence[_Elem], full: bool = True) -> dict:
    """Remainder of ``terms`` modulo the monic elements in ``basis``."""
    p = dict(terms)
    rem = {}
    heap = [(_neg_key(e), e) for e in p]
    heapq.heapify(heap)
    while heap:
        _, e = heapq.heappop(heap)
        c = p.pop(e, None)
        if c is None:
            continue
        g = None
        for cand in basis:
            if _divides(cand.lm, e):
                g = cand
                break
        if g is None:
            if not full:
                rem[e] = c
                rem.update(p)
                return rem
            rem[e] = c
            continue
        shift = tuple(a - b for a, b in zip(e, g.lm))
        for ge, gc in g.tail:
            t = tuple(a + b for a, b in zip(ge, shift))
            old = p.get(t)
            if old is None:
                p[t] = -c * gc
                heapq.heappush(heap, (_neg_key(t), t))
            else:
                new = old - c * gc
                if new:
                    p[t] = new
                else:
                    del p[t]
    return rem


def _spoly(f: _Elem, g: _Elem) -> tuple[dict, int]:
    lcm = _lcm(f.lm, g.lm)
    sf = tuple(a - b for a, b in zip(lcm, f.lm))
    sg = tuple(a - b for a, b in zip(lcm, g.lm))
    out: dict = {}
    for e, c in f.tail:
        t = tuple(a + b for a, b in zip(e, sf))
        out[t] = out.get(t, 0) + c
    for e, c in g.tail:
        t = tuple(a + b for a, b in zip(e, sg))
        v = out.get(t, 0) - c
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    sugar = max(f.sugar + sum(sf), g.sugar + sum(sg))
    return {e: c for e, c in out.items() if c}, sugar


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic Groebner basis, generators sorted by increasing leading monomial."""

    variables: tuple
    generators: tuple
    order: str = ORDER

    @cached_property
    def leading_monomials(self) -> tuple:
        return tuple(g.leading_monomial() for g in self.generators)

    @cached_property
    def _elems(self) -> list:
        return [_Elem(dict(g.items()), g.total_degree()) for g in self.generators]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def is_unit(self) -> bool:
        return is_unit_ideal(self)


def _coprime(a, b) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _update(G: list, active: set, pairs: list, h_idx: int) -> list:
    """Gebauer-Moeller installation of the new element ``G[h_idx]``."""
    h = G[h_idx]
    C = [(g, _lcm(G[g].lm, h.lm)) for g in sorted(active)]
    D = []
    while C:
        g1, l1 = C.pop(0)
        if _coprime(G[g1].lm, h.lm) or not any(_divides(l2, l1) for _, l2 in C + D):
            D.append((g1, l1))
    new_pairs = [(g, h_idx) for g, _ in D if not _coprime(G[g].lm, h.lm)]
    kept = []
    for i, j in pairs:
        lij = _lcm(G[i].lm, G[j].lm)
        if _divides(h.lm, lij) and _lcm(G[i].lm, h.lm) != lij and _lcm(G[j].lm, h.lm) != lij:
            continue
        kept.append((i, j))
    for g in list(active):
        if _divides(h.lm, G[g].lm):
            active.discard(g)
    active.add(h_idx)
    return kept + new_pairs


def _pair_key(G, pair):
    i, j = pair
    lcm = _lcm(G[i].lm, G[j].lm)
    sugar = max(
        G[i].sugar + sum(lcm) - sum(G[i].lm),
        G[j].sugar + sum(lcm) - sum(G[j].lm),
    )
    return (degrevlex_key(lcm), sugar, i, j)


def _buchberger(polys: list) -> list:
    G: list = []
    active: set = set()
    pairs: list = []
    work = sorted(
        (dict(p.items()) for p in polys if not p.is_zero()),
        key=lambda d: degrevlex_key(max(d, key=degrevlex_key)),
    )
    for terms in work:
        sugar = max(sum(e) for e in terms)
        r = _reduce(terms, [G[g] for g in sorted(active)])
        if r:
            G.append(_Elem(r, sugar))
            if not any(G[-1].lm):
                return [G[-1]]
            pairs = _update(G, active, pairs, len(G) - 1)
    while pairs:
        best = min(range(len(pairs)), key=lambda k: _pair_key(G, pairs[k]))
        i, j = pairs.pop(best)
        s, sugar = _spoly(G[i], G[j])
        if not s:
            continue
        r = _reduce(s, [G[g] for g in sorted(active)])
        if not r:
            continue
        elem = _Elem(r, sugar)
        if not any(elem.lm):
            return [elem]
        G.append(elem)
        pairs = _update(G, active, pairs, len(G) - 1)
    return [G[g] for g in sorted(active)]


def _interreduce(G: list) -> list:
    # minimal basis: drop elements whose lm is divisible by another lm
    G = sorted(G, key=lambda g: degrevlex_key(g.lm))
    minimal = []
    for g in G:
        if not any(_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        r = _reduce(g.as_dict(), others)
        out.append(_Elem(r, g.sugar))
    return out


def reduced_groebner(generators: Sequence[Polynomial], variables: Sequence[str] | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal spanned by ``generators``.

    The result is canonical: independent of generator order and scaling.
    ``variables`` is only needed when ``generators`` is empty.
    """
    generators = list(generators)
    if generators:
        variables = generators[0].variables
        for g in generators:
            if g.variables != variables:
                raise PolynomialError("all generators must share one variable list")
    elif variables is None:
        raise PolynomialError("variables required for an empty generator list")
    variables = tuple(variables)
    G = _interreduce(_buchberger(generators))
    gens = tuple(
        Polynomial._raw(variables, g.as_dict()) for g in sorted(G, key=lambda g: degrevlex_key(g.lm))
    )
    return GroebnerBasis(variables, gens)


def normal_form(p: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Complete reduction of ``p`` modulo ``gb``."""
    if p.variables != gb.variables:
        raise PolynomialError(f"variable mismatch: {p.variables} vs {gb.variables}")
    if p.is_zero() or not gb.generators:
        return p
    return Polynomial._raw(p.variables, _reduce(dict(p.items()), gb._elems))


def is_unit_ideal(gb: GroebnerBasis) -> bool:
    return len(gb.generators) == 1 and gb.generators[0].is_constant() and not gb.generators[0].is_zero()


def s_polynomials_reduce_to_zero(gb: GroebnerBasis) -> bool:
    """Buchberger criterion self-check over every pair."""
    elems = gb._elems
    for f, g in itertools.combinations(elems, 2):
        s, _ = _spoly(f, g)
        if s and _reduce(s, elems):
            return False
    return True


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientAlgebra:
    """Finite-dimensional quotient Q[x]/I with its staircase monomial basis.

    Elements are handled as coordinate vectors (lists of Fractions) in the
    ``basis`` order, which is increasing degrevlex with ``1`` first.
    """

    gb: GroebnerBasis
    basis: tuple
    index: dict = field(repr=False, compare=False, hash=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def variables(self) -> tuple:
        return self.gb.variables

    def basis_polynomial(self, i: int) -> Polynomial:
        return Polynomial.monomial(self.variables, self.basis[i])

    def coords(self, p: Polynomial) -> list:
        """Coordinates of normal_form(p) in the staircase basis."""
        nf = normal_form(p, self.gb)
        v = [Fraction(0)] * self.dimension
        for e, c in nf.items():
            v[self.index[e]] = c
        return v

    def element(self, vec: Sequence) -> Polynomial:
        return Polynomial(self.variables, {self.basis[i]: c for i, c in enumerate(vec) if c})

    @cached_property
    def product_table(self) -> list:
        """``table[i][j]`` = coordinates of normal_form(b_i * b_j) (sparse dict)."""
        D = self.dimension
        table = [[None] * D for _ in range(D)]
        elems = self.gb._elems
        for i in range(D):
            for j in range(i, D):
                e = tuple(a + b for a, b in zip(self.basis[i], self.basis[j]))
                if e in self.index:
                    vec = {self.index[e]: Fraction(1)}
                else:
                    nf = _reduce({e: Fraction(1)}, elems)
                    vec = {self.index[m]: c for m, c in nf.items()}
                table[i][j] = table[j][i] = vec
        return table

    def multiply(self, a: Sequence, b: Sequence) -> list:
        """Product of two elements given as coordinate vectors."""
        out = [Fraction(0)] * self.dimension
        table = self.product_table
        nz_b = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if not x:
                continue
            row = table[i]
            for j, y in nz_b:
                xy = x * y
                for k, c in row[j].items():
                    out[k] += xy * c
        return out

    @cached_property
    def trace_vector(self) -> list:
        """T(b_k) for every basis monomial."""
        table = self.product_table
        D = self.dimension
        return [sum((table[k][j].get(j, 0) for j in range(D)), Fraction(0)) for k in range(D)]

    @cached_property
    def hermite(self) -> tuple:
        """T(b_i * b_j), the Gram matrix of the weight-1 trace form."""
        tv = self.trace_vector
        table = self.product_table
        D = self.dimension
        return tuple(
            tuple(sum((c * tv[k] for k, c in table[i][j].items()), Fraction(0)) for j in range(D))
            for i in range(D)
        )

    def contains_unit(self, polys: Sequence[Polynomial]) -> bool:
        """Whether the images of ``polys`` generate the whole algebra.

        Equivalent to ``1 in I + <polys>``; decided by the rank of the span
        of all products ``p * b_j``.
        """
        D = self.dimension
        if D == 0:
            return True
        from .linalg import RowEchelon

        ech = RowEchelon(D)
        for p in polys:
            v = self.coords(p)
            if not any(v):
                continue
            for j in range(D):
                unit = [Fraction(0)] * D
                unit[j] = Fraction(1)
                if ech.add(self.multiply(v, unit)) and ech.rank == D:
                    return True
        return ech.rank == D


def quotient_basis(gb: GroebnerBasis) -> QuotientAlgebra:
    """Staircase basis of Q[x]/I; raises if the quotient is infinite."""
    n = len(gb.variables)
    if is_unit_ideal(gb):
        return QuotientAlgebra(gb, (), {})
    lms = gb.leading_monomials
    bounds = []
    for v in range(n):
        pure = [lm[v] for lm in lms if lm[v] > 0 and all(k == 0 for i, k in enumerate(lm) if i != v)]
        if not pure:
            raise InfiniteDimensionError(
                f"no pure power of {gb.variables[v]} among leading terms: quotient is infinite dimensional"
            )
        bounds.append(min(pure))
    basis = []
    for e in itertools.product(*(range(b) for b in bounds)):
        if not any(_divides(lm, e) for lm in lms):
            basis.append(e)
    basis.sort(key=degrevlex_key)
    return QuotientAlgebra(gb, tuple(basis), {e: i for i, e in enumerate(basis)})
