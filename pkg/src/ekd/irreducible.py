"""Numerical irreducibility certificates for monic integer polynomials.

A monic p in Z[x] factors over Z iff some nonempty proper subset S of its
roots has ``prod_{i in S} (x - alpha_i)`` in Z[x]. With certified root
disks we can bound every coefficient of that product and rule a subset out
as soon as one coefficient provably misses every integer. All bounds are
computed with exact integers on the enclosures' dyadic grid.

Subsets are visited in Gray-code order so the two cheap invariants (sum of
the roots and log of the modulus of their product) change by one root per
step. Only subsets that survive both filters get the full product.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from math import isqrt
from typing import Sequence

from .errors import InputError, NotSquarefreeError, UnsupportedDegreeError
from .polynomial import IntPolynomial, divides
from .roots import DEFAULT_BITS, PRECISION_CAP, RootEnclosure, ladder_from, solve_roots

MAX_DEGREE = 24
_LOG_SCALE = 1 << 32
_LOG_SLACK = 1 << 3  # 2^-29 in log space, far above float log error


class Irreducibility(enum.Enum):
    IRREDUCIBLE = "IRREDUCIBLE"
    REDUCIBLE = "REDUCIBLE"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class IrreducibilityVerdict:
    status: Irreducibility
    witness: IntPolynomial | None
    certified_at_bits: int

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "witness": None if self.witness is None else str(self.witness),
            "bits": self.certified_at_bits,
        }


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def _rational_root_factor(p: IntPolynomial) -> IntPolynomial | None:
    if p.constant == 0:
        return IntPolynomial((0, 1))
    if abs(p.constant) > 10**12:
        return None  # the subset scan still covers linear factors
    for r in _divisors(p.constant):
        for s in (r, -r):
            if p(s) == 0:
                return IntPolynomial((-s, 1))
    return None


def _holds_integer(c: int, err: int, shift: int) -> bool:
    """Does [c - err, c + err] * 2^-shift contain an integer?"""
    top = (c + err) >> shift
    bottom = -((-(c - err)) >> shift)
    return top >= bottom


def _candidate_factor(roots: Sequence[RootEnclosure], subset: Sequence[int]):
    """Certified coefficient boxes of prod (x - alpha_i) over the subset.

    Returns None if some coefficient excludes every integer, otherwise the
    monic integer polynomial obtained by rounding each coefficient.
    """
    e = roots[0].exp
    # prod (Y - X_i) with Y = 2^e x; coefficient of Y^{m-j} is (-1)^j e_j(X)
    er = [1]
    ei = [0]
    maj = [1]  # e_j(M + R)
    maj0 = [1]  # e_j(M)
    for i in subset:
        r = roots[i]
        m2 = r.re * r.re + r.im * r.im
        s = isqrt(m2)
        mod_up = s if s * s == m2 else s + 1
        er_new = er + [0]
        ei_new = ei + [0]
        maj_new = maj + [0]
        maj0_new = maj0 + [0]
        for j in range(len(er), 0, -1):
            pr, pi = er[j - 1], ei[j - 1]
            er_new[j] += pr * r.re - pi * r.im
            ei_new[j] += pr * r.im + pi * r.re
            maj_new[j] += maj[j - 1] * (mod_up + r.rad)
            maj0_new[j] += maj0[j - 1] * mod_up
        er, ei, maj, maj0 = er_new, ei_new, maj_new, maj0_new
    m = len(subset)
    coeffs = [0] * (m + 1)
    coeffs[m] = 1
    for j in range(1, m + 1):
        err = maj[j] - maj0[j]
        if abs(ei[j]) > err:
            return None
        shift = e * j
        if not _holds_integer(er[j], err, shift):
            return None
        nearest = (er[j] + (1 << (shift - 1))) >> shift if shift else er[j]
        coeffs[m - j] = nearest if j % 2 == 0 else -nearest
    return IntPolynomial(tuple(coeffs))


def _scan_subsets(p: IntPolynomial, roots: Sequence[RootEnclosure]):
    """Returns ("IRREDUCIBLE", None), ("REDUCIBLE", factor) or ("UNDECIDED", None)."""
    d = p.degree
    e = roots[0].exp
    ln2e = e * math.log(2)
    log_lo, log_hi = [], []
    for r in roots:
        m2 = r.re * r.re + r.im * r.im
        s = isqrt(m2)
        low = s - r.rad
        high = s + 1 + r.rad
        log_hi.append(math.ceil((math.log(high) - ln2e) * _LOG_SCALE) + _LOG_SLACK)
        log_lo.append(None if low <= 0 else math.floor((math.log(low) - ln2e) * _LOG_SCALE) - _LOG_SLACK)

    size = 0
    sum_re = sum_im = err = 0
    lo_sum = hi_sum = 0
    unbounded = 0  # members with no positive modulus lower bound
    members = [False] * d
    undecided = False
    half = d // 2
    for step in range(1, 1 << d):
        k = (step & -step).bit_length() - 1
        r = roots[k]
        sign = -1 if members[k] else 1
        members[k] = not members[k]
        size += sign
        sum_re += sign * r.re
        sum_im += sign * r.im
        err += sign * r.rad
        hi_sum += sign * log_hi[k]
        if log_lo[k] is None:
            unbounded += sign
        else:
            lo_sum += sign * log_lo[k]
        if size > half:
            continue
        # coefficient of x^{size-1} is -(sum of roots)
        if abs(sum_im) > err or not _holds_integer(sum_re, err, e):
            continue
        # |constant coefficient| is a positive integer
        upper = hi_sum / _LOG_SCALE
        if upper < 0:
            continue
        if upper < 30 and not unbounded:
            lower = lo_sum / _LOG_SCALE
            if math.floor(math.exp(upper)) < math.ceil(math.exp(lower)):
                continue
        subset = [i for i in range(d) if members[i]]
        q = _candidate_factor(roots, subset)
        if q is None:
            continue
        if divides(q, p):
            return "REDUCIBLE", q
        undecided = True
    return ("UNDECIDED", None) if undecided else ("IRREDUCIBLE", None)


def test_irreducible(p: IntPolynomial, roots: Sequence[RootEnclosure] | None = None,
                     bits: int = DEFAULT_BITS, cap: int = PRECISION_CAP) -> IrreducibilityVerdict:
    """Certify irreducibility of a monic integer polynomial of degree <= 24."""
    if not p.is_monic:
        raise InputError("irreducibility test requires a monic polynomial")
    if p.degree > MAX_DEGREE:
        raise UnsupportedDegreeError(f"degree {p.degree} exceeds the supported maximum {MAX_DEGREE}")
    if p.degree < 1:
        raise InputError("constant polynomial")
    factor = _rational_root_factor(p)
    if factor is not None:
        return IrreducibilityVerdict(Irreducibility.REDUCIBLE, factor, 0)
    if p.degree == 1:
        return IrreducibilityVerdict(Irreducibility.IRREDUCIBLE, None, 0)
    if roots is not None:
        bits = roots[0].precision_bits
    for b in ladder_from(bits, cap):
        try:
            rs = roots if (roots is not None and b == bits) else solve_roots(p, b, cap)
        except NotSquarefreeError as exc:
            return IrreducibilityVerdict(Irreducibility.REDUCIBLE, exc.gcd, 0)
        outcome, q = _scan_subsets(p, rs)
        if outcome == "IRREDUCIBLE":
            return IrreducibilityVerdict(Irreducibility.IRREDUCIBLE, None, b)
        if outcome == "REDUCIBLE":
            return IrreducibilityVerdict(Irreducibility.REDUCIBLE, q, b)
    return IrreducibilityVerdict(Irreducibility.UNKNOWN, None, cap)


# pytest would otherwise try to collect the public name as a test
test_irreducible.__test__ = False
