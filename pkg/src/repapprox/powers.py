"""Exact matrix powers and the rational approximation sequences they yield.

A sequence is defined by an entry-index pair for the numerator, one for the
denominator, and an affine offset: value(n) = M^n[num] / M^n[den] + offset.
Errors are measured exactly against a certified rational enclosure of the
limit (normally a refined real root), so no floating-point noise enters the
reported |value - limit| numbers.
"""

from dataclasses import dataclass

import mpmath as mp

from . import _linalg
from .backends import decimal_digit_count, floor_log10, rational, to_mpf
from .errors import UsageError, ZeroDenominator
from .regrep import RegRepMatrix
from .roots import Enclosure, isolating_interval_for, refine_to_decimal_digits


@dataclass(frozen=True)
class MatrixPower:
    base: RegRepMatrix
    n: int
    entries: tuple


@dataclass(frozen=True)
class ApproximationRecord:
    """One step of an approximation sequence.

    value/abs_error are exact rationals; they are None when the denominator
    entry vanished at this n (a legal transient for sparse matrices).
    den_digits counts the decimal digits of the unreduced denominator
    (the denominator entry itself, for integer matrices);
    reduced_den_digits counts the denominator of the fully reduced value.
    """

    n: int
    value: object = None
    abs_error: object = None
    den_digits: int = None
    reduced_den_digits: int = None

    @property
    def available(self):
        return self.value is not None


def digit_count(v):
    """Decimal digit count of a nonzero exact integer."""
    return decimal_digit_count(v)


def mat_pow(M: RegRepMatrix, n) -> MatrixPower:
    if n < 0:
        raise UsageError("matrix power requires n >= 0")
    return MatrixPower(M, n, _linalg.mat_pow_entries(M.entries, n))


def _check_index(pair, m, label):
    i, j = pair
    if not (1 <= i <= m and 1 <= j <= m):
        raise UsageError(f"{label} index {pair} out of range 1..{m}")
    return (int(i), int(j))


def _record_from_entries(entries, n, num, den, offset, target):
    e_num = entries[num[0] - 1][num[1] - 1]
    e_den = entries[den[0] - 1][den[1] - 1]
    if e_den == 0:
        return ApproximationRecord(n=n)
    value = e_num / e_den + offset
    unreduced_den = (
        abs(int(e_num.denominator) * int(e_den.numerator)) * int(offset.denominator)
    )
    err = None if target is None else abs(value - target.center)
    return ApproximationRecord(
        n=n,
        value=value,
        abs_error=err,
        den_digits=decimal_digit_count(unreduced_den),
        reduced_den_digits=decimal_digit_count(value.denominator),
    )


def error_reference(M: RegRepMatrix, num, den, offset=0, n_max=100, min_digits=30):
    """Certified enclosure of the limit of the (num, den, offset) sequence.

    The dominance analysis predicts the limit L and the error decay rate;
    the enclosure is then refined until its radius is at least ten decimal
    digits below the smallest error expected within n <= n_max.  When L +
    offset coincides with a real root of f the enclosure comes from the
    certified real-root refinement; otherwise from the Vandermonde limit
    evaluated at increasing precision.
    """
    from . import convergence  # deferred: convergence builds on this module's records

    f, w = M.poly, M.weights
    offset = rational(offset)
    report = convergence.analyze(f, w)
    pred = convergence.limit_ratio(f, w, num, den, report)

    if pred.degenerate and tuple(num) + tuple(den) in _constant_families(M.size):
        # These ratios are exactly constant: A_t/B_t = 1/u_m for every t.
        return Enclosure(rational(1) / f.u[-1] + offset, rational(0))

    with mp.workprec(report.work_prec):
        log_c = mp.log10(report.c_value)
        if pred.rate_constant > 0:
            expected = int(mp.ceil(n_max * log_c - mp.log10(pred.rate_constant)))
        else:
            expected = int(mp.ceil(n_max * log_c))
        digits = max(min_digits, expected + 10)
        target_value = pred.limit + to_mpf(offset, mp)

        for est in report.roots:
            if not est.is_real:
                continue
            margin = 4 * (pred.limit_error + est.radius) + mp.mpf(2) ** (
                -report.work_prec // 2
            )
            if abs(est.center - target_value) <= margin:
                interval = isolating_interval_for(f, est)
                return refine_to_decimal_digits(f, interval, digits)

    return convergence.limit_enclosure(f, w, num, den, report, digits, offset)


def _constant_families(m):
    return {(m, m - 1, 1, m), (m, 1, 1, 2)}


def ratio_sequence(
    M: RegRepMatrix, num, den, offset=0, n_list=(), target=None
) -> list:
    """ApproximationRecords for value(n) = M^n[num]/M^n[den] + offset.

    `target` is a certified Enclosure of the limit; if omitted it is resolved
    automatically from the dominance analysis.  Zero denominator entries mark
    the record unavailable instead of failing the run.
    """
    m = M.size
    num = _check_index(num, m, "numerator")
    den = _check_index(den, m, "denominator")
    offset = rational(offset)
    ns = sorted(set(int(n) for n in n_list))
    if not ns:
        return []
    if ns[0] < 0:
        raise UsageError("sequence indices must be nonnegative")
    if target is None:
        target = error_reference(M, num, den, offset, n_max=ns[-1])

    records = []
    current = _linalg.mat_pow_entries(M.entries, ns[0])
    prev_n = ns[0]
    for n in ns:
        if n != prev_n:
            current = _linalg.mat_mul(
                current, _linalg.mat_pow_entries(M.entries, n - prev_n)
            )
            prev_n = n
        records.append(_record_from_entries(current, n, num, den, offset, target))

    records = _ensure_error_resolution(records, M, num, den, offset, ns[-1], target)
    if all(not r.available for r in records):
        raise ZeroDenominator(
            f"denominator entry M^n[{den}] vanished at every requested n"
        )
    return records


def _ensure_error_resolution(records, M, num, den, offset, n_max, target):
    """Re-refine the limit enclosure if any error is drowned by its radius."""
    if target.radius == 0:
        return records
    nonzero = [r.abs_error for r in records if r.available and r.abs_error > 0]
    if not nonzero or min(nonzero) > 10 * target.radius:
        return records
    err_digits = -floor_log10(min(nonzero)) + 20
    better = error_reference(M, num, den, offset, n_max, min_digits=err_digits)
    return [
        r
        if not r.available
        else ApproximationRecord(
            n=r.n,
            value=r.value,
            abs_error=abs(r.value - better.center),
            den_digits=r.den_digits,
            reduced_den_digits=r.reduced_den_digits,
        )
        for r in records
    ]


def accelerated_sequence(
    M: RegRepMatrix, stride, steps, num, den, offset=0, target=None
) -> list:
    """Repeated stride-th powering: records at n = stride, stride^2, ...

    Step k re-raises the previous matrix to the stride-th power, so six steps
    at stride 3 reach M^729 with a handful of multiplications.  stride 1
    degenerates to plain stepping (identical to ratio_sequence over 1..steps).
    """
    if stride < 1:
        raise UsageError("stride must be >= 1")
    if steps < 1:
        raise UsageError("steps must be >= 1")
    if stride == 1:
        return ratio_sequence(M, num, den, offset, range(1, steps + 1), target)
    m = M.size
    num = _check_index(num, m, "numerator")
    den = _check_index(den, m, "denominator")
    offset = rational(offset)
    n_max = stride**steps
    if n_max > 10_000_000:
        raise UsageError(
            f"stride**steps = {n_max} is beyond any tractable matrix power; "
            "reduce --steps"
        )
    if target is None:
        target = error_reference(M, num, den, offset, n_max=n_max)
    records = []
    current = _linalg.mat_pow_entries(M.entries, stride)
    n = stride
    for step in range(1, steps + 1):
        records.append(_record_from_entries(current, n, num, den, offset, target))
        if step < steps:
            current = _linalg.mat_pow_entries(current, stride)
            n *= stride
    records = _ensure_error_resolution(records, M, num, den, offset, n_max, target)
    return records


@dataclass(frozen=True)
class ConstantRatioFamily:
    indices: tuple  # (i, j, p, q)
    constant: object  # the common exact value, or None if never defined
    holds: bool
    checked: tuple  # n values with a defined ratio
    skipped: tuple  # n values with a zero denominator entry
    duplicate_of_first: bool = False


def constant_ratio_check(M: RegRepMatrix, n_max) -> list:
    """Verify the two index families whose entry ratios are constant in n.

    For (i,j,p,q) = (m,m-1,1,m) and (m,1,1,2) the ratio of entries of M^n is
    independent of n; zero denominators at small n are skipped and reported.
    """
    m = M.size
    if m < 2:
        raise UsageError("constant-ratio families need m >= 2")
    families = [(m, m - 1, 1, m), (m, 1, 1, 2)]
    results = []
    for fam_idx, (i, j, p, q) in enumerate(families):
        duplicate = fam_idx == 1 and families[0] == families[1]
        values, checked, skipped = [], [], []
        power = _linalg.identity(m)
        for n in range(1, int(n_max) + 1):
            power = _linalg.mat_mul(power, M.entries)
            d = power[p - 1][q - 1]
            if d == 0:
                skipped.append(n)
                continue
            checked.append(n)
            values.append(power[i - 1][j - 1] / d)
        constant = values[0] if values else None
        holds = bool(values) and all(v == constant for v in values)
        results.append(
            ConstantRatioFamily(
                indices=(i, j, p, q),
                constant=constant,
                holds=holds,
                checked=tuple(checked),
                skipped=tuple(skipped),
                duplicate_of_first=duplicate,
            )
        )
    return results
