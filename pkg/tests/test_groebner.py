from fractions import Fraction
import random

import pytest

from crosscap.groebner import (
    InfiniteDimensionError,
    is_unit_ideal,
    normal_form,
    quotient_basis,
    reduced_groebner,
    s_polynomials_reduce_to_zero,
)
from crosscap.poly import Polynomial, parse_polynomial

XY = ("x", "y")
XYZ = ("x", "y", "z")


def polys(texts, variables):
    return [parse_polynomial(t, variables) for t in texts]


def random_poly(rng, variables, degree=3, terms=4):
    n = len(variables)
    d = {}
    for _ in range(terms):
        e = [0] * n
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(n)] += 1
        d[tuple(e)] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    return Polynomial(variables, d)


def test_principal():
    gb = reduced_groebner(polys(["x^2-1"], ("x",)))
    assert list(gb.generators) == polys(["x^2-1"], ("x",))


def test_inconsistent_is_unit():
    gb = reduced_groebner(polys(["x", "x+1"], ("x",)))
    assert is_unit_ideal(gb)
    assert list(gb.generators) == [Polynomial.constant(("x",), 1)]


def test_twisted_cubic_basis():
    gb = reduced_groebner(polys(["y-x^2", "z-x^3"], XYZ))
    for g in polys(["x^2-y", "x*y-z"], XYZ):
        assert g in gb.generators
    assert s_polynomials_reduce_to_zero(gb)
    assert all(g.leading_coefficient() == 1 for g in gb.generators)


def test_empty_input_is_zero_ideal():
    gb = reduced_groebner([], XY)
    assert list(gb.generators) == []
    assert not is_unit_ideal(gb)


def test_normal_form_examples():
    gb = reduced_groebner(polys(["x^2-1"], ("x",)))
    assert normal_form(parse_polynomial("x^2", ("x",)), gb) == Polynomial.constant(("x",), 1)
    unit = reduced_groebner(polys(["1"], XY))
    assert normal_form(parse_polynomial("x^5+3*y", XY), unit).is_zero()


def test_normal_form_is_ring_morphism_and_idempotent():
    rng = random.Random(5)
    gb = reduced_groebner(polys(["x^2-2", "y^2-3"], XY))
    for _ in range(20):
        p, q = random_poly(rng, XY), random_poly(rng, XY)
        np_, nq = normal_form(p, gb), normal_form(q, gb)
        assert normal_form(p * q, gb) == normal_form(np_ * nq, gb)
        assert normal_form(np_, gb) == np_
        assert normal_form(p + q, gb) == np_ + nq


def test_is_unit_ideal_flags():
    assert is_unit_ideal(reduced_groebner(polys(["1"], XY)))
    assert not is_unit_ideal(reduced_groebner(polys(["x^2-1"], ("x",))))


def test_pivot_hypothesis_example1(ex1):
    from crosscap.engine import build_delta

    dd = build_delta(ex1)
    gens = list(ex1.singular_gb.generators) + [dd.pivot_minor]
    assert is_unit_ideal(reduced_groebner(gens, ex1.variables))


def test_quotient_examples():
    qa = quotient_basis(reduced_groebner(polys(["x^2", "y"], XY)))
    assert qa.dimension == 2
    assert [qa.basis_polynomial(i) for i in range(2)] == polys(["1", "x"], XY)
    assert quotient_basis(reduced_groebner(polys(["1"], XY))).dimension == 0


def test_quotient_infinite():
    with pytest.raises(InfiniteDimensionError):
        quotient_basis(reduced_groebner(polys(["x*y"], XY)))


def test_example1_dimension(ex1):
    assert ex1.dim_A >= 11
    assert ex1.dim_A == 15


def test_staircase_is_order_ideal(ex1):
    basis = set(ex1.qa.basis)
    for e in basis:
        for i, k in enumerate(e):
            if k:
                assert e[:i] + (k - 1,) + e[i + 1 :] in basis
    assert ex1.qa.basis[0] == (0, 0, 0)


def _random_system(seed):
    rng = random.Random(seed)
    return [random_poly(rng, XYZ, degree=2, terms=4) + Polynomial.constant(XYZ, rng.randint(-3, 3)) for _ in range(3)]


@pytest.mark.parametrize("seed", range(8))
def test_canonical_under_shuffle_and_rescale(seed):
    gens = _random_system(seed)
    gb = reduced_groebner(gens, XYZ)
    rng = random.Random(100 + seed)
    for _ in range(3):
        shuffled = [g * Fraction(rng.choice([-3, -1, 2, 5]), rng.randint(1, 7)) for g in gens]
        rng.shuffle(shuffled)
        assert reduced_groebner(shuffled, XYZ).generators == gb.generators
    # a redundant combination of the generators must not change anything
    extra = gens[0] * gens[1] + gens[2] * Fraction(3)
    assert reduced_groebner(gens + [extra], XYZ).generators == gb.generators
    assert s_polynomials_reduce_to_zero(gb)


@pytest.mark.parametrize("seed", range(6))
def test_membership_soundness(seed):
    gens = _random_system(seed)
    gb = reduced_groebner(gens, XYZ)
    rng = random.Random(seed)
    for _ in range(5):
        p = sum((g * random_poly(rng, XYZ, degree=2) for g in gens), Polynomial.zero(XYZ))
        assert normal_form(p, gb).is_zero()


def test_example1_basis_self_check(ex1):
    assert s_polynomials_reduce_to_zero(ex1.singular_gb)
    for mu in ex1.mu:
        assert normal_form(mu, ex1.singular_gb).is_zero()
