"""Regular-representation matrices M(x, u).

M represents multiplication by x_0 + x_1*a + ... + x_{m-1}*a^(m-1) on the
power basis of Q[t]/(f), where a is a root of f.  Two independent
construction paths are kept public on purpose: ``build`` accumulates powers
of the companion matrix (the production path), while ``entries_via_formula``
goes through the explicit multinomial entry expansion and exists to
cross-validate it.
"""

import math
from dataclasses import dataclass

from . import _linalg
from .backends import rational
from .errors import UsageError
from .polynomial import Polynomial


@dataclass(frozen=True)
class Weights:
    """Coordinates (x_0, ..., x_{m-1}) of an element of Q[t]/(f)."""

    x: tuple

    def __init__(self, x):
        x = tuple(rational(c) for c in x)
        if not x:
            raise UsageError("weights must be nonempty")
        if all(c == 0 for c in x):
            raise UsageError("weights must not all be zero")
        object.__setattr__(self, "x", x)

    def __len__(self):
        return len(self.x)

    def __iter__(self):
        return iter(self.x)


@dataclass(frozen=True)
class RegRepMatrix:
    entries: tuple
    weights: Weights
    poly: Polynomial

    @property
    def size(self):
        return len(self.entries)

    def entry(self, i, j):
        """1-based entry access, matching the i,j convention used throughout."""
        return self.entries[i - 1][j - 1]


def _coerce_weights(f, x):
    w = x if isinstance(x, Weights) else Weights(x)
    if len(w) != f.degree:
        raise UsageError(f"expected {f.degree} weights, got {len(w)}")
    return w


def build(f: Polynomial, x) -> RegRepMatrix:
    """M = sum of x_n * A^n over n < m, with A the companion matrix of f.

    Horner-style accumulation: M = (...(x_{m-1} A + x_{m-2} I) A + ...) + x_0 I.
    """
    w = _coerce_weights(f, x)
    a = f.companion().entries
    m = f.degree
    ident = _linalg.identity(m)
    acc = _linalg.mat_scale(w.x[m - 1], ident)
    for n in range(m - 2, -1, -1):
        acc = _linalg.mat_add(_linalg.mat_mul(acc, a), _linalg.mat_scale(w.x[n], ident))
    return RegRepMatrix(acc, w, f)


def build_cubic(p, q, r, x, y, z) -> RegRepMatrix:
    """Closed-form 3x3 regular representation for f = t^3 - p t^2 - q t - r."""
    p, q, r = rational(p), rational(q), rational(r)
    x, y, z = rational(x), rational(y), rational(z)
    entries = (
        (x, r * z, r * y + p * r * z),
        (y, x + q * z, q * y + (p * q + r) * z),
        (z, y + p * z, x + p * y + (p * p + q) * z),
    )
    return RegRepMatrix(entries, Weights((x, y, z)), Polynomial((p, q, r)))


def _weighted_compositions(target, s):
    """Tuples (k_1, ..., k_s) of nonnegative ints with sum of i*k_i == target."""
    if s == 0:
        if target == 0:
            yield ()
        return
    for k in range(target // s + 1):
        for head in _weighted_compositions(target - s * k, s - 1):
            yield head + (k,)


def entry_multinomial(f: Polynomial, i, j, n):
    """Entry (i, j) of the n-th companion-matrix power, 1-based indices.

    Sums over nonnegative (k_1, ..., k_m) with k_1 + 2 k_2 + ... + m k_m =
    n - i + j the terms

        (k_{m+1-i} + ... + k_m) / (k_1 + ... + k_m)
            * multinomial(k_1, ..., k_m) * u_1^{k_1} ... u_m^{k_m}.

    An empty index set (n - i + j < 0) gives 0; the all-zero solution
    (n - i + j = 0) contributes 1, which reproduces A^0 = I.
    """
    m = f.degree
    if not (1 <= i <= m and 1 <= j <= m):
        raise UsageError(f"indices ({i},{j}) out of range 1..{m}")
    if n < 0:
        raise UsageError("matrix power index n must be >= 0")
    target = n - i + j
    if target < 0:
        return rational(0)
    total = rational(0)
    for ks in _weighted_compositions(target, m):
        ktot = sum(ks)
        if ktot == 0:
            total += 1
            continue
        tail = sum(ks[m - i :])
        if tail == 0:
            continue
        coeff = math.factorial(ktot)
        for k in ks:
            coeff //= math.factorial(k)
        term = rational(tail * coeff, ktot)
        for u_s, k in zip(f.u, ks):
            if k:
                term *= u_s**k
        total += term
    return total


def entries_via_formula(f: Polynomial, x) -> RegRepMatrix:
    """M built purely from the multinomial entry formula (cross-check path)."""
    w = _coerce_weights(f, x)
    m = f.degree
    entries = tuple(
        tuple(
            sum(
                (w.x[n] * entry_multinomial(f, i, j, n) for n in range(m)),
                start=rational(0),
            )
            for j in range(1, m + 1)
        )
        for i in range(1, m + 1)
    )
    return RegRepMatrix(entries, w, f)
