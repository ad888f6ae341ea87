"""Floating-point cross-validation of the exact counts.

Real points of a zero-dimensional ``V(I)`` are read off from eigenvectors
of a random combination of the multiplication matrices (Stickelberger),
polished by Gauss-Newton on the generators, and each cross-cap is given a
sign from the determinant of the oriented derivative frame at the point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .groebner import QuotientAlgebra
from .poly import Polynomial, PolynomialMap, differentiate, jacobian

TOL_RESIDUAL = 1e-8
TOL_DEDUP = 1e-6
TOL_DET = 1e-8
TOL_IMAG = 1e-4
TOL_RANK = 1e-7


class OracleError(ArithmeticError):
    pass


class ConvergenceError(OracleError):
    """Shifted QR did not converge; try another seed."""


class RankTestError(OracleError):
    """The point is not a clean corank-one point of Df."""


class DegenerateDeterminantError(OracleError):
    """det A1 vanishes numerically: the point is not a cross-cap."""


@dataclass(frozen=True)
class ApproxPoint:
    coordinates: tuple
    residual: float
    condition: float = float("nan")

    @property
    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.coordinates))


@dataclass(frozen=True)
class SignedCrossCap:
    point: ApproxPoint
    sign: int
    det_value: float


@dataclass(frozen=True)
class Totals:
    count: int
    positives: int
    negatives: int
    signed_sum: int

    def as_tuple(self) -> tuple:
        return (self.count, self.positives, self.negatives, self.signed_sum)


# ---------------------------------------------------------------------------
# float evaluation of polynomial systems


class FloatSystem:
    """Vectorised evaluation of a list of polynomials at float/complex points."""

    def __init__(self, polys: Sequence[Polynomial]):
        monos = sorted({e for p in polys for e in p.terms})
        index = {e: i for i, e in enumerate(monos)}
        self.nvars = polys[0].nvars if polys else 0
        self.exps = np.array(monos, dtype=np.int64).reshape(len(monos), self.nvars)
        C = np.zeros((len(polys), len(monos)))
        for r, p in enumerate(polys):
            for e, c in p.items():
                C[r, index[e]] = float(c)
        self.coeffs = C
        self.abs_coeffs = np.abs(C)

    def _monomials(self, x):
        x = np.asarray(x)
        if self.exps.size == 0:
            return np.ones(0, dtype=x.dtype)
        return np.prod(x[None, :] ** self.exps, axis=1)

    def __call__(self, x) -> np.ndarray:
        return self.coeffs @ self._monomials(x)

    def scale(self, x) -> np.ndarray:
        """Sum of absolute term values: the natural rounding-error scale."""
        return self.abs_coeffs @ np.abs(self._monomials(np.abs(np.asarray(x, dtype=float))))


class FloatJacobian:
    def __init__(self, polys: Sequence[Polynomial]):
        n = polys[0].nvars
        self.rows = len(polys)
        self.cols = n
        self.system = FloatSystem([differentiate(p, j) for p in polys for j in range(n)])

    def __call__(self, x) -> np.ndarray:
        return self.system(x).reshape(self.rows, self.cols)


# ---------------------------------------------------------------------------
# dense eigenvalues: Householder Hessenberg reduction + Francis double shift


def hessenberg(A) -> np.ndarray:
    H = np.array(A, dtype=float)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1 :, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        if x[0] > 0:
            alpha = -alpha
        v = x
        v[0] -= alpha
        vn = np.linalg.norm(v)
        if vn == 0.0:
            continue
        v /= vn
        H[k + 1 :, k:] -= 2.0 * np.outer(v, v @ H[k + 1 :, k:])
        H[:, k + 1 :] -= 2.0 * np.outer(H[:, k + 1 :] @ v, v)
        H[k + 2 :, k] = 0.0
    return H


def hqr(H, max_iter: int = 60) -> np.ndarray:
    """Eigenvalues of an upper Hessenberg matrix by shifted QR iteration."""
    a = np.array(H, dtype=float)
    n = a.shape[0]
    wr = np.zeros(n)
    wi = np.zeros(n)
    anorm = float(np.sum(np.abs(np.triu(a, -1))))
    nn = n - 1
    t = 0.0
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l >= 1:
                s = abs(a[l - 1, l - 1]) + abs(a[l, l])
                if s == 0.0:
                    s = anorm
                if abs(a[l, l - 1]) + s == s:
                    a[l, l - 1] = 0.0
                    break
                l -= 1
            x = a[nn, nn]
            if l == nn:
                wr[nn] = x + t
                nn -= 1
                break
            y = a[nn - 1, nn - 1]
            w = a[nn, nn - 1] * a[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + math.copysign(z, p)
                    wr[nn - 1] = wr[nn] = x + z
                    if z:
                        wr[nn] = x - w / z
                else:
                    wr[nn - 1] = wr[nn] = x + p
                    wi[nn - 1] = -z
                    wi[nn] = z
                nn -= 2
                break
            if its == max_iter:
                raise ConvergenceError("shifted QR iteration did not converge")
            if its in (10, 20, 40):
                # exceptional shift
                t += x
                for i in range(nn + 1):
                    a[i, i] -= x
                s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                x = y = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            m = nn - 2
            while m >= l:
                z = a[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                q = a[m + 1, m + 1] - z - r - s
                r = a[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                if u + v == v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i, i - 2] = 0.0
                if i != m + 2:
                    a[i, i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = a[k, k - 1]
                    q = a[k + 1, k - 1]
                    r = a[k + 2, k - 1] if k != nn - 1 else 0.0
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.copysign(math.sqrt(p * p + q * q + r * r), p)
                if s == 0.0:
                    continue
                if k == m:
                    if l != m:
                        a[k, k - 1] = -a[k, k - 1]
                else:
                    a[k, k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                for j in range(k, nn + 1):
                    p = a[k, j] + q * a[k + 1, j]
                    if k != nn - 1:
                        p += r * a[k + 2, j]
                        a[k + 2, j] -= p * z
                    a[k + 1, j] -= p * y
                    a[k, j] -= p * x
                mmin = nn if nn < k + 3 else k + 3
                for i in range(l, mmin + 1):
                    p = x * a[i, k] + y * a[i, k + 1]
                    if k != nn - 1:
                        p += z * a[i, k + 2]
                        a[i, k + 2] -= p * r
                    a[i, k + 1] -= p * q
                    a[i, k] -= p
    return wr + 1j * wi


def eigenvalues(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    if A.shape[0] == 1:
        return np.array([complex(A[0, 0])])
    return hqr(hessenberg(A))


def inverse_iteration(A, lam: complex, iters: int = 3) -> np.ndarray:
    """Eigenvector of ``A`` for the (approximate) eigenvalue ``lam``."""
    n = A.shape[0]
    scale = max(1.0, float(np.max(np.abs(A))))
    shift = lam + 1e-10 * scale * (1 + 1j)
    B = A.astype(complex) - shift * np.eye(n)
    v = np.ones(n, dtype=complex) / math.sqrt(n)
    for _ in range(iters):
        try:
            w = np.linalg.solve(B, v)
        except np.linalg.LinAlgError:
            B = B + 1e-12 * scale * np.eye(n)
            w = np.linalg.solve(B, v)
        v = w / np.linalg.norm(w)
    return v


# ---------------------------------------------------------------------------


def _float_matrix(rows) -> np.ndarray:
    return np.array([[float(x) for x in r] for r in rows], dtype=float)


def variable_matrices(qa: QuotientAlgebra) -> list:
    """Float multiplication matrices of each coordinate function."""
    from .trace_form import multiplication_matrix

    return [
        _float_matrix(multiplication_matrix(Polynomial.variable(qa.variables, i), qa).matrix)
        for i in range(len(qa.variables))
    ]


def gauss_newton(system: FloatSystem, jac: FloatJacobian, x0, max_iter: int = 50, tol: float = 1e-10):
    """Least-squares Newton on an overdetermined real system.

    Keeps the best iterate; stops when the residual falls below ``tol`` or
    fails to decrease.
    """
    x = np.array(x0, dtype=float)
    best = float(np.max(np.abs(system(x)))) if system.coeffs.shape[0] else 0.0
    history = [best]
    for _ in range(max_iter):
        if best < tol:
            break
        F = system(x)
        J = jac(x)
        step, *_ = np.linalg.lstsq(J, F, rcond=None)
        cand = x - step
        res = float(np.max(np.abs(system(cand))))
        if not res < best:
            break
        x, best = cand, res
        history.append(res)
    return x, best, history


def refine_extended(polys: Sequence[Polynomial], x0, dps: int = 50, max_iter: int = 12):
    """Gauss-Newton in multiprecision for points with large term magnitudes.

    Returns the float rounding of the refined point and the residual
    ``max |p_i|`` evaluated at the refined multiprecision point.
    """
    import mpmath

    n = len(x0)
    derivs = [[differentiate(p, j) for j in range(n)] for p in polys]
    with mpmath.workdps(dps):
        x = [mpmath.mpf(float(v)) for v in x0]

        def ev(p, pt):
            acc = mpmath.mpf(0)
            for e, c in p.items():
                t = mpmath.mpf(c.numerator) / c.denominator
                for v, k in zip(pt, e):
                    if k:
                        t *= v**k
                acc += t
            return acc

        res = max(abs(ev(p, x)) for p in polys)
        for _ in range(max_iter):
            F = mpmath.matrix([ev(p, x) for p in polys])
            J = mpmath.matrix([[ev(d, x) for d in row] for row in derivs])
            JT = J.T
            try:
                step = mpmath.lu_solve(JT * J, JT * F)
            except ZeroDivisionError:
                break
            cand = [x[i] - step[i] for i in range(n)]
            cres = max(abs(ev(p, cand)) for p in polys)
            if not cres < res:
                break
            x, res = cand, cres
            if res < mpmath.mpf(10) ** (-(dps // 2)):
                break
        return np.array([float(v) for v in x]), float(res)


def solve_singular_points(
    qa: QuotientAlgebra,
    mu: Sequence[Polynomial] | PolynomialMap,
    seed: int = 0,
    tol_residual: float = TOL_RESIDUAL,
    tol_dedup: float = TOL_DEDUP,
    f: PolynomialMap | None = None,
) -> list:
    """Approximate real points of V(I) for the generators ``mu`` of I.

    When the map ``f`` is given, each point's ``condition`` is the
    (m-1)-th singular value of Df there.
    """
    mu = list(mu)
    if qa.dimension == 0:
        return []
    rng = random.Random(seed)
    mats = variable_matrices(qa)
    n = len(mats)
    coeffs = [Fraction(rng.randint(-1000, 1000), 997) for _ in range(n)]
    Mc = sum(float(c) * M for c, M in zip(coeffs, mats))
    lams = eigenvalues(Mc)
    McT = Mc.T
    system = FloatSystem(mu)
    jac = FloatJacobian(mu)
    candidates = []
    for lam in lams:
        if abs(lam.imag) > 1e-3 * max(1.0, abs(lam)):
            continue
        v = inverse_iteration(McT, lam)
        vv = np.vdot(v, v)
        coords = np.array([np.vdot(v, M.T @ v) / vv for M in mats])
        if np.any(np.abs(coords.imag) > TOL_IMAG * np.maximum(1.0, np.abs(coords))):
            continue
        x, res, _ = gauss_newton(system, jac, coords.real)
        if not res < tol_residual:
            x, res = refine_extended(mu, x)
        if res < tol_residual:
            candidates.append((x, res))
    points: list = []
    for x, res in candidates:
        if any(np.linalg.norm(x - np.array(p.coordinates)) < tol_dedup * max(1.0, np.linalg.norm(x)) for p in points):
            continue
        cond = float("nan")
        if f is not None:
            sv = np.linalg.svd(FloatJacobian(list(f.components))(x), compute_uv=False)
            cond = float(sv[f.nvars - 2]) if f.nvars >= 2 else float("nan")
        points.append(ApproxPoint(tuple(float(c) for c in x), res, cond))
    points.sort(key=lambda p: p.coordinates)
    return points


# ---------------------------------------------------------------------------
# sign of a cross-cap


class _Derivatives:
    """Float first and second derivatives of a map, built once."""

    def __init__(self, f: PolynomialMap):
        self.f = f
        n = f.nvars
        self.first = FloatJacobian(list(f.components))
        second = []
        for comp in f.components:
            for a in range(n):
                da = differentiate(comp, a)
                for b in range(n):
                    second.append(differentiate(da, b))
        self.second = FloatSystem(second)
        self.c = len(f)
        self.n = n

    def hessians(self, x) -> np.ndarray:
        return self.second(x).reshape(self.c, self.n, self.n)


_DERIV_CACHE: dict = {}


def _derivatives(f: PolynomialMap) -> _Derivatives:
    d = _DERIV_CACHE.get(f)
    if d is None:
        d = _DERIV_CACHE[f] = _Derivatives(f)
    return d


def orthonormal_frame(v) -> np.ndarray:
    """Positively oriented orthonormal basis whose first column is ``v``.

    Gram-Schmidt against the coordinate vectors, taken in order of
    increasing overlap with ``v`` (column pivoting).
    """
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    n = v.size
    cols = [v]
    for k in np.argsort(np.abs(v), kind="stable"):
        if len(cols) == n:
            break
        w = np.zeros(n)
        w[k] = 1.0
        for c in cols:
            w -= (c @ w) * c
        nw = np.linalg.norm(w)
        if nw > 1e-8:
            cols.append(w / nw)
    phi = np.column_stack(cols)
    if np.linalg.det(phi) < 0:
        phi[:, -1] = -phi[:, -1]
    return phi


def crosscap_sign_at(
    f: PolynomialMap,
    point: ApproxPoint | Sequence[float],
    tol_rank: float = TOL_RANK,
    tol_det: float = TOL_DET,
    kernel_vector=None,
) -> SignedCrossCap:
    """Sign of the cross-cap of ``f`` at ``point``.

    In coordinates ``y`` with ``x = p + phi(y)``, where ``phi`` is a positive
    orthonormal frame whose first column spans ker Df(p), the columns
    ``w_2(0), ..., w_m(0), dw_1/dy_1(0), ..., dw_1/dy_m(0)`` form a square
    matrix A1; the cross-cap is positive exactly when det A1 < 0.
    """
    if not isinstance(point, ApproxPoint):
        point = ApproxPoint(tuple(float(c) for c in point), float("nan"))
    x = np.array(point.coordinates, dtype=float)
    d = _derivatives(f)
    m = f.nvars
    Df = d.first(x)
    U, sv, Vt = np.linalg.svd(Df)
    top = max(float(sv[0]), 1.0)
    if sv[m - 2] < tol_rank * top or sv[m - 1] > math.sqrt(tol_rank) * top:
        raise RankTestError(
            f"Df at {point.coordinates} has singular values {sv.tolist()}: not corank one"
        )
    v = Vt[m - 1] if kernel_vector is None else np.asarray(kernel_vector, dtype=float)
    phi = orthonormal_frame(v)
    H = d.hessians(x)  # (c, m, m)
    first_cols = [Df @ phi[:, j] for j in range(1, m)]
    Hv = np.einsum("cab,a->cb", H, phi[:, 0])
    second_cols = [Hv @ phi[:, j] for j in range(m)]
    A1 = np.column_stack(first_cols + second_cols)
    det = float(np.linalg.det(A1))
    norms = np.linalg.norm(A1, axis=0)
    if np.any(norms == 0.0) or np.linalg.svd(A1 / norms, compute_uv=False)[-1] < tol_det:
        raise DegenerateDeterminantError(f"det A1 = {det:.3e} is degenerate at {point.coordinates}")
    sign = -1 if det > 0 else 1
    point = ApproxPoint(point.coordinates, point.residual, float(sv[m - 2]))
    return SignedCrossCap(point, sign, det)


def classify_all(
    f: PolynomialMap,
    qa: QuotientAlgebra,
    mu: Sequence[Polynomial],
    seed: int = 0,
    tol_residual: float = TOL_RESIDUAL,
    tol_dedup: float = TOL_DEDUP,
    points: Sequence[ApproxPoint] | None = None,
) -> tuple:
    if points is None:
        points = solve_singular_points(qa, mu, seed, tol_residual, tol_dedup, f=f)
    caps = [crosscap_sign_at(f, p) for p in points]
    pos = sum(1 for c in caps if c.sign > 0)
    neg = len(caps) - pos
    return caps, Totals(len(caps), pos, neg, pos - neg)
