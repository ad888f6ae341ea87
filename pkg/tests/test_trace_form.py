from fractions import Fraction
import random

import pytest

from crosscap.groebner import quotient_basis, reduced_groebner
from crosscap.linalg import charpoly_berkowitz, matmul, transpose
from crosscap.poly import Polynomial, parse_polynomial
from crosscap.trace_form import (
    NotSymmetricError,
    TrivialAlgebraError,
    gram_matrix,
    multiplication_matrix,
    signature,
    trace,
    trace_quadratic_form,
)

from sturm import eigen_sign_count, faddeev_leverrier

X = ("x",)
XY = ("x", "y")


def qa_of(texts, variables):
    return quotient_basis(reduced_groebner([parse_polynomial(t, variables) for t in texts], variables))


def P(t, v):
    return parse_polynomial(t, v)


def as_lists(M):
    return [list(r) for r in M]


def test_multiplication_by_one_is_identity():
    qa = qa_of(["x^2-1", "y^2-1"], XY)
    M = multiplication_matrix(P("1", XY), qa).matrix
    assert as_lists(M) == [[int(i == j) for j in range(4)] for i in range(4)]


def test_companion_matrix():
    qa = qa_of(["x^2-2"], X)
    assert as_lists(multiplication_matrix(P("x", X), qa).matrix) == [[0, 2], [1, 0]]


def test_multiplication_matrices_commute_and_compose():
    qa = qa_of(["x^2-1", "y^2-1"], XY)
    Mx = as_lists(multiplication_matrix(P("x", XY), qa).matrix)
    My = as_lists(multiplication_matrix(P("y", XY), qa).matrix)
    assert matmul(Mx, My) == matmul(My, Mx)
    assert matmul(Mx, My) == as_lists(multiplication_matrix(P("x*y", XY), qa).matrix)


def test_trivial_algebra():
    qa = qa_of(["1"], X)
    with pytest.raises(TrivialAlgebraError):
        multiplication_matrix(P("x", X), qa)
    assert trace(P("x", X), qa) == 0


def test_trace_examples():
    qa = qa_of(["x^2-2"], X)
    assert trace(P("1", X), qa) == qa.dimension == 2
    assert trace(P("x", X), qa) == 0
    assert trace(P("x^2", X), qa) == 4


def test_trace_equals_matrix_trace_and_is_additive():
    qa = qa_of(["x^2-2*y", "y^2-x-1"], XY)
    rng = random.Random(2)
    for _ in range(10):
        h1 = Polynomial(XY, {(rng.randint(0, 3), rng.randint(0, 3)): rng.randint(-5, 5) for _ in range(3)})
        h2 = Polynomial(XY, {(rng.randint(0, 3), rng.randint(0, 3)): rng.randint(-5, 5) for _ in range(3)})
        M = multiplication_matrix(h1, qa).matrix
        assert trace(h1, qa) == sum(M[i][i] for i in range(len(M)))
        assert trace(h1 + h2, qa) == trace(h1, qa) + trace(h2, qa)
        g1, g2, g12 = gram_matrix(h1, qa), gram_matrix(h2, qa), gram_matrix(h1 + h2, qa)
        assert g12 == [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(g1, g2)]


def test_trace_form_examples():
    qa = qa_of(["x^2-2"], X)
    tf = trace_quadratic_form(P("1", X), qa)
    assert as_lists(tf.gram) == [[2, 0], [0, 4]]
    assert tf.inertia == (2, 0, 0)
    qa = qa_of(["x^2+1"], X)
    tf = trace_quadratic_form(P("1", X), qa)
    assert as_lists(tf.gram) == [[2, 0], [0, -2]]
    assert tf.inertia == (1, 1, 0) and tf.signature == 0
    tf = trace_quadratic_form(P("0", X), qa)
    assert tf.inertia == (0, 0, 2) and not tf.nondegenerate


def test_gram_entries_are_traces():
    qa = qa_of(["x^2-2*y", "y^2-x-1"], XY)
    h = P("x-3*y+1", XY)
    G = gram_matrix(h, qa)
    for i in range(qa.dimension):
        for j in range(qa.dimension):
            bij = qa.basis_polynomial(i) * qa.basis_polynomial(j)
            assert G[i][j] == trace(h * bij, qa)


def test_signature_examples():
    assert signature([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (3, 0, 0)
    assert signature([[1, 0], [0, -1]]) == (1, 1, 0)
    assert signature([]) == (0, 0, 0)
    with pytest.raises(NotSymmetricError):
        signature([[1, 2], [3, 4]])


def random_symmetric(rng, n, rank=None):
    if rank is None:
        A = [[Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(n)] for _ in range(n)]
        return [[A[i][j] if i <= j else A[j][i] for j in range(n)] for i in range(n)]
    # low rank: sum of signed rank-one terms
    G = [[Fraction(0)] * n for _ in range(n)]
    for _ in range(rank):
        v = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)]
        s = rng.choice([-1, 1])
        for i in range(n):
            for j in range(n):
                G[i][j] += s * v[i] * v[j]
    return G


def random_unimodular(rng, n):
    L = [[1 if i == j else (rng.randint(-2, 2) if i > j else 0) for j in range(n)] for i in range(n)]
    U = [[1 if i == j else (rng.randint(-2, 2) if i < j else 0) for j in range(n)] for i in range(n)]
    return matmul(L, U)


def test_independent_charpoly_agrees():
    rng = random.Random(0)
    for n in range(1, 7):
        A = random_symmetric(rng, n)
        from crosscap.linalg import integer_scaled

        B = integer_scaled(A)
        assert charpoly_berkowitz(B) == list(reversed(faddeev_leverrier(B)))


@pytest.mark.parametrize("n", range(1, 9))
def test_sylvester_congruence(n):
    rng = random.Random(n)
    for _ in range(4):
        G = random_symmetric(rng, n, rank=rng.randint(0, n))
        C = random_unimodular(rng, n)
        H = matmul(transpose(C), matmul(G, C))
        assert signature(H) == signature(G)
