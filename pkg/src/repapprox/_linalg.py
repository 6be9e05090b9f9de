"""Tiny exact dense-matrix helpers (tuples of tuples of rationals)."""

from .backends import rational


def identity(m):
    one, zero = rational(1), rational(0)
    return tuple(tuple(one if i == j else zero for j in range(m)) for i in range(m))


def mat_mul(a, b):
    m, inner, cols = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols))
        for i in range(m)
    )


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, a):
    return tuple(tuple(c * x for x in row) for row in a)


def mat_pow_entries(a, n):
    """a**n by square-and-multiply; n >= 0."""
    result = identity(len(a))
    base = a
    while n:
        if n & 1:
            result = mat_mul(result, base)
        n >>= 1
        if n:
            base = mat_mul(base, base)
    return result


def det(a):
    """Exact determinant by fraction-free expansion (small m only)."""
    m = len(a)
    if m == 1:
        return a[0][0]
    total = rational(0)
    sign = 1
    for col in range(m):
        minor = tuple(row[:col] + row[col + 1 :] for row in a[1:])
        total += sign * a[0][col] * det(minor)
        sign = -sign
    return total
