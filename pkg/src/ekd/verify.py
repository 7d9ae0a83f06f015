"""Certified evaluation of |a_0| |a_1|^c_1 ... |a_k|^c_k and related reports.

Everything here reads moduli through ``ModulusProfile.position`` so the
results do not depend on how roots inside a tied group happen to be ordered.
Comparisons that the current precision cannot settle are retried on a
refined profile until the precision cap.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

from mpmath import iv

from . import intervals as ivl
from .errors import CertificationError, ConsistencyError, InputError, NoGapError
from .irreducible import Irreducibility, IrreducibilityVerdict, test_irreducible
from .polynomial import IntPolynomial, TrinomialSpec, is_root_of_unity_poly, is_unit_polynomial, make_trinomial
from .roots import DEFAULT_BITS, PRECISION_CAP, ModulusProfile, modulus_profile

RELATIVE_WIDTH = Fraction(1, 2**32)


class Verdict(enum.Enum):
    POSITIVE = "POSITIVE"
    NEGATIVE = "NEGATIVE"
    INDETERMINATE = "INDETERMINATE"


class CaseClass(enum.Enum):
    REAL_REAL = "REAL_REAL"
    REAL_COMPLEX = "REAL_COMPLEX"
    COMPLEX_COMPLEX = "COMPLEX_COMPLEX"


@lru_cache(maxsize=8192)
def irreducibility(p: IntPolynomial, cap: int = PRECISION_CAP) -> IrreducibilityVerdict:
    """Cached irreducibility verdict; scans ask for the same polynomial many times."""
    return test_irreducible(p, bits=min(DEFAULT_BITS, cap), cap=cap)


def _require_irreducible(p: IntPolynomial, cap: int) -> None:
    if not p.is_monic:
        raise InputError(f"{p} is not monic")
    v = irreducibility(p, cap)
    if v.status is not Irreducibility.IRREDUCIBLE:
        raise InputError(f"{p} is not certified irreducible ({v.status.value})")


def _point(c: Sequence) -> tuple[Fraction, ...]:
    pt = tuple(Fraction(x) for x in c)
    if any(x < 0 for x in pt):
        raise InputError("exponents must be nonnegative")
    return pt


def _memo(profile: ModulusProfile, name: str, build):
    """Per-profile cache; profiles are immutable and shared through modulus_profile's cache."""
    store = profile.__dict__.setdefault("_memo", {})
    if name not in store:
        store[name] = build()
    return store[name]


def _positions(profile: ModulusProfile) -> list:
    return _memo(profile, "positions", lambda: [profile.position(i) for i in range(profile.degree)])


def _log_positions(profile: ModulusProfile) -> list:
    """log of every position interval, or None where the interval reaches 0."""
    def build():
        with ivl.precision(profile.bits + 32):
            return [iv.log(m) if ivl.lo(m) > 0 else None for m in _positions(profile)]
    return _memo(profile, "logs", build)


def _log_product(profile: ModulusProfile, c: tuple[Fraction, ...]):
    """Interval for log|a_0| + sum c_i log|a_i|, or None if a needed modulus may be 0."""
    logs = _log_positions(profile)
    q = lcm(*(x.denominator for x in c)) if c else 1
    terms = [(0, q)] + [(i, int(ci * q)) for i, ci in enumerate(c, 1) if ci]
    if any(logs[i] is None for i, _ in terms):
        return None
    with ivl.precision(profile.bits + 32):
        total = iv.mpf(0)
        for i, n in terms:
            total += n * logs[i]
        return total / q if q != 1 else total


def _product_once(profile: ModulusProfile, c: tuple[Fraction, ...]):
    s = _log_product(profile, c)
    if s is None:
        return None
    with ivl.precision(profile.bits + 32):
        return iv.exp(s)


def _check_dimension(profile: ModulusProfile, c: tuple[Fraction, ...]) -> None:
    if profile.degree <= len(c):
        raise InputError(f"degree {profile.degree} must exceed the dimension {len(c)}")


def conjugate_product(profile: ModulusProfile, c: Sequence) -> ivl.Interval:
    """Certified interval for |a_0| |a_1|^c_1 ... |a_k|^c_k.

    Refines until the relative width is at most 2^-32 or the cap is reached.
    """
    pt = _point(c)
    _check_dimension(profile, pt)
    while True:
        val = _product_once(profile, pt)
        if val is not None:
            with ivl.precision(profile.bits + 32):
                if ivl.width(val) <= ivl.hi(val) * RELATIVE_WIDTH.numerator / RELATIVE_WIDTH.denominator:
                    return val
        if not profile.can_refine():
            if val is None:
                raise CertificationError("a modulus interval contains 0 at the precision cap", bits=profile.bits)
            return val
        profile = profile.refine()


def _verdict(x: ivl.Interval) -> Verdict | None:
    cmp = ivl.compare_to_one(x)
    if cmp > 0:
        return Verdict.POSITIVE
    if cmp < 0:
        return Verdict.NEGATIVE
    return None


def _integer_power_form(profile: ModulusProfile, c: tuple[Fraction, ...]):
    """(|a_0| prod |a_i|^c_i)^q with q the common denominator, using integer powers only."""
    q = lcm(*(x.denominator for x in c)) if c else 1
    pos = _positions(profile)
    with ivl.precision(profile.bits + 32):
        val = pos[0] ** q
        for i, ci in enumerate(c, 1):
            n = int(ci * q)
            if n:
                val = val * pos[i] ** n
        return val


@dataclass(frozen=True)
class MarginReport:
    poly: IntPolynomial
    point: tuple[Fraction, ...]
    value: ivl.Interval
    verdict: Verdict
    precision_bits: int
    subset: tuple[int, ...] | None = None

    @property
    def k(self) -> int:
        return len(self.point)

    def margin(self) -> ivl.Interval:
        with ivl.precision(self.precision_bits + 32):
            return self.value - 1

    def to_json(self) -> dict:
        with ivl.precision(self.precision_bits + 32):
            value = ivl.to_json(self.value, 30)
        value["bits"] = self.precision_bits
        return {
            "poly": str(self.poly),
            "k": self.k,
            "subsetJ": None if self.subset is None else list(self.subset),
            "c": [str(x) for x in self.point],
            "value": value,
            "verdict": self.verdict.value,
        }


def check_membership_witness(p: IntPolynomial, c: Sequence, *, subset: Sequence[int] | None = None,
                             bits: int = DEFAULT_BITS, cap: int = PRECISION_CAP,
                             cross_check: bool = True) -> MarginReport:
    """Decide |a_0| prod |a_i|^c_i against 1 for the conjugates of p."""
    pt = _point(c)
    if p.degree <= len(pt):
        raise InputError(f"degree {p.degree} must exceed the dimension {len(pt)}")
    _require_irreducible(p, cap)
    profile = modulus_profile(p, bits, cap)
    while True:
        val = _product_once(profile, pt)
        verdict = None if val is None else _verdict(val)
        if verdict is not None or not profile.can_refine():
            break
        profile = profile.refine()
    if val is None:
        raise CertificationError("a modulus interval contains 0 at the precision cap", bits=profile.bits)
    if verdict is None:
        verdict = Verdict.INDETERMINATE
    if cross_check:
        other = _verdict(_integer_power_form(profile, pt))
        if other is not None and verdict is not Verdict.INDETERMINATE and other is not verdict:
            raise ConsistencyError(f"log and integer-power forms disagree for {p} at {pt}")
    return MarginReport(p, pt, val, verdict, profile.bits, None if subset is None else tuple(subset))


# --------------------------------------------------------------------------
# the margin identity for units


@dataclass(frozen=True)
class IdentityReport:
    poly: IntPolynomial
    last: int  # largest element of J
    lhs: ivl.Interval
    rhs: ivl.Interval
    residual: ivl.Interval
    precision_bits: int

    @property
    def holds(self) -> bool:
        return ivl.contains(self.residual, 0)

    def to_json(self) -> dict:
        with ivl.precision(self.precision_bits + 32):
            return {
                "poly": str(self.poly),
                "iN": self.last,
                "lhs": ivl.to_json(self.lhs, 25),
                "rhs": ivl.to_json(self.rhs, 25),
                "residual": ivl.to_json(self.residual, 25),
                "holds": self.holds,
                "bits": self.precision_bits,
            }


def margin_identity_check(p: IntPolynomial, k: int, subset: Sequence[int], *,
                          bits: int = DEFAULT_BITS, cap: int = PRECISION_CAP) -> IdentityReport:
    """Both sides of

        |a_0| ... |a_{n-1}| |a_n|^2 |a_{n+1}| ... |a_{d-2}| - 1
            = |a_0 ... a_{d-2}| (|a_n| - |a_{d-1}|),     n = max(J),

    which holds whenever |a_0 ... a_{d-1}| = 1.
    """
    js = sorted(set(subset))
    d = p.degree
    if not js or js[0] < 1 or js[-1] > k:
        raise InputError(f"J must be a nonempty subset of 1..{k}")
    if k >= d:
        raise InputError(f"need k < d, got k={k}, d={d}")
    n = js[-1]
    if n > d - 2:
        raise InputError(f"max(J) = {n} must be at most d - 2 = {d - 2}")
    if abs(p.constant) != 1:
        raise InputError(f"|p(0)| = {abs(p.constant)}, the identity needs a unit")
    _require_irreducible(p, cap)
    profile = modulus_profile(p, bits, cap)
    with ivl.precision(profile.bits + 32):
        head = iv.mpf(1)
        for i in range(d - 1):
            head *= profile.position(i)
        lhs = head * profile.position(n) - 1
        rhs = head * (profile.position(n) - profile.position(d - 1))
        residual = lhs - rhs
    return IdentityReport(p, n, lhs, rhs, residual, profile.bits)


# --------------------------------------------------------------------------
# separation of distinct moduli


@dataclass(frozen=True)
class SeparationReport:
    poly: IntPolynomial | None
    min_gap: ivl.Interval
    case_class: CaseClass
    pair: tuple[int, int]
    height: int
    degree: int
    precision_bits: int

    def to_json(self) -> dict:
        with ivl.precision(self.precision_bits + 32):
            gap = ivl.to_json(self.min_gap, 25)
        return {
            "poly": None if self.poly is None else str(self.poly),
            "H": self.height,
            "d": self.degree,
            "gap": gap,
            "caseClass": self.case_class.value,
        }


def _case(profile: ModulusProfile, i: int, j: int) -> CaseClass:
    reals = profile.is_real(i) + profile.is_real(j)
    return (CaseClass.COMPLEX_COMPLEX, CaseClass.REAL_COMPLEX, CaseClass.REAL_REAL)[reals]


def modulus_separation(profile: ModulusProfile, roots=None) -> SeparationReport:
    """Smallest certified gap between consecutive tied groups.

    The gap between groups A > B is min over A minus max over B; the
    representatives achieving those extremes decide the case class.
    ``roots`` is accepted for symmetry with the other reports and ignored:
    the profile already carries its enclosures.
    """
    groups = profile.tied_groups
    if len(groups) < 2:
        raise NoGapError("all moduli are tied; there is no untied pair")
    best = None
    with ivl.precision(profile.bits + 32):
        for upper, lower in zip(groups, groups[1:]):
            i = min(upper, key=lambda t: ivl.lo(profile.moduli[t]))
            j = max(lower, key=lambda t: ivl.hi(profile.moduli[t]))
            low_a = iv.mpf([min(ivl.lo(profile.moduli[t]) for t in upper),
                            min(ivl.hi(profile.moduli[t]) for t in upper)])
            high_b = iv.mpf([max(ivl.lo(profile.moduli[t]) for t in lower),
                             max(ivl.hi(profile.moduli[t]) for t in lower)])
            gap = low_a - high_b
            if best is None or ivl.hi(gap) < ivl.hi(best[0]):
                best = (gap, i, j)
    gap, i, j = best
    p = profile.poly
    return SeparationReport(
        poly=p,
        min_gap=gap,
        case_class=_case(profile, i, j),
        pair=(i, j),
        height=0 if p is None else p.height,
        degree=profile.degree,
        precision_bits=profile.bits,
    )


# --------------------------------------------------------------------------
# unit gap


@dataclass(frozen=True)
class UnitGapResult:
    holds: bool
    index: int | None  # first i < d/3 that is not certified above |a_{d-1}|
    precision_bits: int

    def to_json(self) -> dict:
        return {"holds": self.holds, "index": self.index, "bits": self.precision_bits}


def _structurally_equal(profile: ModulusProfile, i: int, last: int) -> bool:
    """|a_i| = |a_last| exactly when both sit in a group that is a single conjugate pair."""
    g = profile.group_of(last)
    return i in g and len(g) == 2 and profile.partner[g[0]] == g[1]


def unit_gap_property(p: IntPolynomial, *, bits: int = DEFAULT_BITS, cap: int = PRECISION_CAP) -> UnitGapResult:
    """Is |a_i| > |a_{d-1}| certified for every i < d/3?"""
    d = p.degree
    if d < 2:
        raise InputError("degree must be at least 2")
    if not is_unit_polynomial(p):
        raise InputError(f"{p} is not a unit polynomial")
    _require_irreducible(p, cap)
    if is_root_of_unity_poly(p):
        raise InputError(f"{p} is cyclotomic")
    profile = modulus_profile(p, bits, cap)
    i = 0
    while 3 * i < d:
        with ivl.precision(profile.bits + 32):
            above = ivl.lo(profile.position(i)) > ivl.hi(profile.position(d - 1))
        if above:
            i += 1
            continue
        if _structurally_equal(profile, i, d - 1):
            return UnitGapResult(False, i, profile.bits)
        if not profile.can_refine():
            raise CertificationError(f"cannot separate |a_{i}| from |a_{d - 1}|", bits=profile.bits, index=i)
        profile = profile.refine()
    return UnitGapResult(True, None, profile.bits)


# --------------------------------------------------------------------------
# the |r_0| |r_1|^(d-1) bound for x^d - h x^(d-1) + 1


@dataclass(frozen=True)
class SzReport:
    d: int
    h: int
    lhs: ivl.Interval | None
    rhs: Fraction
    holds: bool | None  # None when skipped
    status: str  # "OK" or "SKIP"
    precision_bits: int

    def to_json(self) -> dict:
        out = {"d": self.d, "h": self.h, "rhs": str(self.rhs), "holds": self.holds, "status": self.status}
        if self.lhs is not None:
            with ivl.precision(self.precision_bits + 32):
                out["lhs"] = ivl.to_json(self.lhs, 25)
        return out


def sz_bound(h: int) -> Fraction:
    """1 + 2.2/(|h| - 1.1), exactly."""
    return 1 + Fraction(22, 10 * abs(h) - 11)


def sz_remark_check(d: int, h: int, *, bits: int = DEFAULT_BITS, cap: int = PRECISION_CAP) -> SzReport:
    if d < 2 or abs(h) < 3:
        raise InputError("need d >= 2 and |h| >= 3")
    p = make_trinomial(TrinomialSpec(d, d - 1, h))
    rhs = sz_bound(h)
    if irreducibility(p, cap).status is not Irreducibility.IRREDUCIBLE:
        return SzReport(d, h, None, rhs, None, "SKIP", 0)
    profile = modulus_profile(p, bits, cap)
    while True:
        with ivl.precision(profile.bits + 32):
            lhs = profile.position(0) * profile.position(1) ** (d - 1)
            r = ivl.from_fraction(rhs)
            if ivl.hi(lhs) < ivl.lo(r):
                return SzReport(d, h, lhs, rhs, True, "OK", profile.bits)
            if ivl.lo(lhs) > ivl.hi(r):
                return SzReport(d, h, lhs, rhs, False, "OK", profile.bits)
        if not profile.can_refine():
            raise CertificationError("cannot compare |r0||r1|^(d-1) with the bound", bits=profile.bits)
        profile = profile.refine()
