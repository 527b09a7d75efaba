"""Tiny matrix helpers over arbitrary exact coefficient rings.

Matrices are tuples of tuples. Entries only need +, -, * among
themselves; anything with a truthiness test works for zero checks
(Fraction, FpElem, Poly, RationalFunction, TruncatedSeries all qualify).
"""

from fractions import Fraction


def mat(rows):
    return tuple(tuple(r) for r in rows)


def mat_shape(a):
    return len(a), len(a[0])


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a):
    return tuple(tuple(-x for x in r) for r in a)


def mat_mul(a, b):
    n, k = mat_shape(a)
    _, m = mat_shape(b)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = a[i][0] * b[0][j]
            for t in range(1, k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_scale(a, c):
    return tuple(tuple(c * x for x in r) for r in a)


def mat_map(a, f):
    return tuple(tuple(f(x) for x in r) for r in a)


def mat_vec(a, v):
    return tuple(
        _dot(row, v) for row in a
    )


def _dot(row, v):
    acc = row[0] * v[0]
    for x, y in zip(row[1:], v[1:]):
        acc = acc + x * y
    return acc


def mat_is_zero(a):
    return all(not x for r in a for x in r)


def mat_pow(a, k):
    if k < 1:
        raise ValueError("mat_pow needs k >= 1")
    out = a
    for _ in range(k - 1):
        out = mat_mul(out, a)
    return out


def identity(r, one, zero):
    return tuple(
        tuple(one if i == j else zero for j in range(r)) for i in range(r)
    )


def commutator(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def trace(a):
    acc = a[0][0]
    for i in range(1, len(a)):
        acc = acc + a[i][i]
    return acc


def charpoly_coeffs(a, one, zero):
    """Coefficients [c_1 .. c_r] of det(tI - A) = t^r + c_1 t^(r-1) + ... + c_r.

    Faddeev-LeVerrier; entries must tolerate multiplication by Fraction
    scalars, so this is characteristic-zero only.
    """
    r = len(a)
    eye = identity(r, one, zero)
    m = a
    coeffs = []
    for k in range(1, r + 1):
        ck = trace(m) * Fraction(-1, k)
        coeffs.append(ck)
        if k < r:
            m = mat_mul(a, mat_add(m, mat_scale(eye, ck)))
    return coeffs


def eigenvalues_2x2(a):
    """Exact rational eigenvalues of a 2x2 Fraction matrix, or None when
    they are irrational (discriminant not a rational square)."""
    tr = a[0][0] + a[1][1]
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    disc = tr * tr - 4 * det
    root = _fraction_sqrt(disc)
    if root is None:
        return None
    return ((tr - root) / 2, (tr + root) / 2)


def _fraction_sqrt(q):
    q = Fraction(q)
    if q < 0:
        return None
    import math

    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None
