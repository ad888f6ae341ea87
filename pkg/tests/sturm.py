"""Independent exact root-sign counter for test oracles.

Characteristic polynomial by Faddeev-LeVerrier, multiplicities by Yun's
square-free decomposition, and real roots isolated by bisection driven by
Sturm sequences.  Shares no code with the library.
"""

from fractions import Fraction


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


# polynomials are coefficient lists, lowest degree first


def pmod(a, b):
    a = [Fraction(x) for x in trim(a)]
    b = trim(b)
    while len(a) >= len(b) and a:
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[i + shift] -= q * c
        a = trim(a)
    return a


def pdiv(a, b):
    a = [Fraction(x) for x in trim(a)]
    b = trim(b)
    out = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        out[shift] = q
        for i, c in enumerate(b):
            a[i + shift] -= q * c
        a = trim(a)
    return trim(out)


def deriv(p):
    return trim([i * c for i, c in enumerate(p)][1:])


def gcd(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pmod(a, b)
    return [c / a[-1] for c in a]


def evalp(p, x):
    v = Fraction(0)
    for c in reversed(p):
        v = v * x + c
    return v


def faddeev_leverrier(A):
    """det(tI - A) as a low-first coefficient list."""
    n = len(A)
    A = [[Fraction(x) for x in r] for r in A]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        M = [[sum(A[i][l] * M[l][j] for l in range(n)) + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        AM = [[sum(A[i][l] * M[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(AM[i][i] for i in range(n)) / k
    return coeffs


def yun(p):
    """[(square-free factor, multiplicity), ...]."""
    out = []
    a = gcd(p, deriv(p))
    b = pdiv(p, a)
    c = pdiv(deriv(p), a)
    d = [x - y for x, y in zip_longest(c, deriv(b))]
    i = 1
    while len(trim(b)) > 1:
        a = gcd(b, d)
        b = pdiv(b, a)
        c = pdiv(d, a)
        d = [x - y for x, y in zip_longest(c, deriv(b))]
        if len(a) > 1:
            out.append((a, i))
        i += 1
    return out


def zip_longest(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return zip(a, b)


def sturm_chain(p):
    chain = [trim(p), deriv(p)]
    while chain[-1]:
        r = pmod(chain[-2], chain[-1])
        chain.append([-c for c in r])
    return [q for q in chain if q]


def variations(chain, x):
    signs = [s for s in (evalp(q, x) for q in chain) if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def isolate(p, lo, hi):
    """Disjoint intervals (a, b] each holding exactly one root of square-free p."""
    chain = sturm_chain(p)
    out = []
    stack = [(Fraction(lo), Fraction(hi))]
    while stack:
        a, b = stack.pop()
        n = variations(chain, a) - variations(chain, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        stack += [(a, mid), (mid, b)]
    return sorted(out)


def cauchy_bound(p):
    p = trim(p)
    return 1 + max(abs(c / p[-1]) for c in p[:-1]) if len(p) > 1 else Fraction(1)


def eigen_sign_count(A):
    """(n_plus, n_minus, n_zero) of a symmetric rational matrix."""
    p = faddeev_leverrier(A)
    n_plus = n_minus = n_zero = 0
    for factor, mult in yun(p):
        if evalp(factor, 0) == 0:
            n_zero += mult
            factor = pdiv(factor, [Fraction(0), Fraction(1)])
        if len(factor) <= 1:
            continue
        B = cauchy_bound(factor)
        for a, b in isolate(factor, -B, B):
            # the open interval (a, b] must not straddle zero ambiguously
            while a < 0 < b:
                mid = Fraction(0)
                chain = sturm_chain(factor)
                if variations(chain, a) - variations(chain, mid) == 1:
                    b = mid
                else:
                    a = mid
            if b <= 0:
                n_minus += mult
            else:
                n_plus += mult
    return n_plus, n_minus, n_zero
