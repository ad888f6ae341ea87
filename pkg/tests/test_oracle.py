import math
import random

import numpy as np
import pytest

from crosscap import count_real
from crosscap.groebner import quotient_basis, reduced_groebner
from crosscap.oracle import (
    DegenerateDeterminantError,
    FloatJacobian,
    FloatSystem,
    RankTestError,
    classify_all,
    crosscap_sign_at,
    eigenvalues,
    gauss_newton,
    hessenberg,
    orthonormal_frame,
    solve_singular_points,
)
from crosscap.poly import PolynomialMap, parse_polynomial

XY = ("x", "y")
XYZ = ("x", "y", "z")


# eigen solver -----------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 5, 12, 30])
def test_eigenvalues_match_numpy(n):
    rng = np.random.default_rng(n)
    A = rng.normal(size=(n, n))
    ours = np.sort_complex(eigenvalues(A))
    ref = np.sort_complex(np.linalg.eigvals(A))
    assert np.allclose(ours, ref, atol=1e-8 * max(1.0, np.abs(ref).max()))


def test_hessenberg_is_similar():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(7, 7))
    H = hessenberg(A)
    assert np.allclose(np.tril(H, -2), 0)
    assert math.isclose(np.trace(H), np.trace(A), abs_tol=1e-10)
    assert np.allclose(np.sort_complex(np.linalg.eigvals(H)), np.sort_complex(np.linalg.eigvals(A)))


def test_eigenvalues_companion_with_complex_pair():
    # x^3 - 1: roots 1 and a complex pair
    C = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=float)
    ev = np.sort_complex(eigenvalues(C))
    ref = np.sort_complex(np.roots([1, 0, 0, -1]))
    assert np.allclose(ev, ref)


# point solving -------------------------------------------------------------------


def test_sqrt_two_points():
    gens = [parse_polynomial(t, XY) for t in ["x^2-2", "y-1"]]
    qa = quotient_basis(reduced_groebner(gens))
    pts = solve_singular_points(qa, gens)
    coords = sorted(p.coordinates for p in pts)
    assert len(coords) == 2
    assert np.allclose(coords, [(-math.sqrt(2), 1), (math.sqrt(2), 1)], atol=1e-9)


def test_no_real_points():
    gens = [parse_polynomial(t, XY) for t in ["x^2+1", "y"]]
    qa = quotient_basis(reduced_groebner(gens))
    assert solve_singular_points(qa, gens) == []


def test_example1_points(ex1):
    pts = ex1.points(0)
    assert len(pts) == 11 == count_real(ex1)
    assert all(p.residual < 1e-8 for p in pts)
    for a in pts:
        for b in pts:
            if a is not b:
                assert np.linalg.norm(np.subtract(a.coordinates, b.coordinates)) > 1e-6


def test_reseed_gives_same_points(ex1):
    a = np.array(sorted(p.coordinates for p in ex1.points(0)))
    b = np.array(sorted(p.coordinates for p in solve_singular_points(ex1.qa, list(ex1.mu), seed=7, f=ex1.f)))
    assert a.shape == b.shape
    assert np.allclose(a, b, atol=1e-8)


def test_gauss_newton_monotone(ex1):
    system = FloatSystem(list(ex1.mu))
    jac = FloatJacobian(list(ex1.mu))
    for p in ex1.points(0):
        x0 = np.array(p.coordinates) + 1e-4
        x, res, history = gauss_newton(system, jac, x0)
        assert all(b < a for a, b in zip(history, history[1:]))
        assert res < 1e-8
        assert len(history) <= 51


# signs ------------------------------------------------------------------------------


def whitney(m):
    names = [f"x{i}" for i in range(1, m + 1)]
    comps = [f"{names[0]}^2"] + names[1:] + [f"{names[0]}*{v}" for v in names[1:]]
    return PolynomialMap.parse(comps, names)


@pytest.mark.parametrize("m", [3, 5])
def test_whitney_sign(m):
    cap = crosscap_sign_at(whitney(m), (0.0,) * m)
    assert cap.det_value == pytest.approx(2.0)
    assert cap.sign == -1


@pytest.mark.parametrize("m", [3, 5])
def test_sign_stable_under_kernel_flip(m):
    f = whitney(m)
    v = np.zeros(m)
    v[0] = 1.0
    a = crosscap_sign_at(f, (0.0,) * m, kernel_vector=v)
    b = crosscap_sign_at(f, (0.0,) * m, kernel_vector=-v)
    assert a.sign == b.sign
    assert a.det_value == pytest.approx(b.det_value)


def test_kernel_flip_on_example1(ex1):
    d = FloatJacobian(list(ex1.f))
    for p in ex1.points(0):
        v = np.linalg.svd(d(np.array(p.coordinates)))[2][-1]
        a = crosscap_sign_at(ex1.f, p, kernel_vector=v)
        b = crosscap_sign_at(ex1.f, p, kernel_vector=-v)
        assert a.sign == b.sign
        assert a.det_value == pytest.approx(b.det_value, rel=1e-6)


def test_orthonormal_frame_positive():
    rng = np.random.default_rng(1)
    for _ in range(20):
        v = rng.normal(size=5)
        v /= np.linalg.norm(v)
        phi = orthonormal_frame(v)
        assert np.allclose(phi[:, 0], v)
        assert np.allclose(phi.T @ phi, np.eye(5), atol=1e-12)
        assert np.linalg.det(phi) > 0


def test_rank_test_failure():
    f = whitney(3)
    with pytest.raises(RankTestError):
        crosscap_sign_at(PolynomialMap.parse(["x^2", "y^2", "z", "x*y", "x*z"], XYZ), (0.0, 0.0, 0.0))
    with pytest.raises(RankTestError):
        crosscap_sign_at(f, (1.0, 0.0, 0.0))  # regular point


def test_degenerate_determinant():
    # corank one at the origin but the second-order vectors are dependent
    f = PolynomialMap.parse(["x^3", "y", "z", "x*y", "x*z"], XYZ)
    with pytest.raises(DegenerateDeterminantError):
        crosscap_sign_at(f, (0.0, 0.0, 0.0))


def test_sign_invariant_under_positive_target_change(ex1):
    rng = random.Random(4)
    A = [[rng.randint(-2, 2) for _ in range(5)] for _ in range(5)]
    while np.linalg.det(np.array(A, dtype=float)) <= 0.5:
        A = [[rng.randint(-2, 2) for _ in range(5)] for _ in range(5)]
    g = ex1.f.transformed(A)
    for p in ex1.points(0):
        assert crosscap_sign_at(g, p).sign == crosscap_sign_at(ex1.f, p).sign


def test_reflection_flips_sign(ex1):
    R = [[-1 if i == j == 0 else int(i == j) for j in range(5)] for i in range(5)]
    g = ex1.f.transformed(R)
    for p in ex1.points(0):
        assert crosscap_sign_at(g, p).sign == -crosscap_sign_at(ex1.f, p).sign


# aggregation ------------------------------------------------------------------------


def test_classify_example1(ex1):
    caps, totals = classify_all(ex1.f, ex1.qa, list(ex1.mu))
    assert totals.as_tuple() == (11, 6, 5, 1)


def test_classify_sphere_example(sphere):
    caps, totals = classify_all(sphere.f, sphere.qa, list(sphere.mu))
    assert totals.as_tuple() == (8, 5, 3, 2)


def test_classify_example2(ex2):
    caps, totals = classify_all(ex2.f, ex2.qa, list(ex2.mu), points=ex2.points(0))
    assert totals.as_tuple() == (3, 2, 1, 1)
    assert all(c.point.residual < 1e-8 for c in caps)
