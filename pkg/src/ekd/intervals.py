"""Thin helpers around mpmath's interval context.

Intervals are ``mpmath.iv.mpf`` values throughout the package; these helpers
handle precision scoping, exact construction from dyadic integers and
fractions, and endpoint access without going through floats.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

import mpmath
from mpmath import iv, mp
from mpmath.libmp import from_man_exp, to_str

Interval = type(iv.mpf(0))


@contextmanager
def precision(bits: int):
    """Set both the interval and the float context to ``bits``."""
    old_iv, old_mp = iv.prec, mp.prec
    iv.prec = bits
    mp.prec = bits
    try:
        yield
    finally:
        iv.prec = old_iv
        mp.prec = old_mp


def dyadic(man: int, exp: int) -> mpmath.mpf:
    """Exact mpf for man * 2**exp (no rounding)."""
    return mp.make_mpf(from_man_exp(int(man), int(exp)))


def dyadic_interval(lo: int, hi: int, exp: int) -> Interval:
    """[lo * 2**exp, hi * 2**exp] with exact endpoints."""
    return iv.mpf([dyadic(lo, exp), dyadic(hi, exp)])


def from_fraction(q: Fraction | int) -> Interval:
    q = Fraction(q)
    if q.denominator == 1:
        return iv.mpf(q.numerator)
    return iv.mpf(q.numerator) / q.denominator


def lo(x: Interval) -> mpmath.mpf:
    return mp.make_mpf(x._mpi_[0])


def hi(x: Interval) -> mpmath.mpf:
    return mp.make_mpf(x._mpi_[1])


def width(x: Interval) -> mpmath.mpf:
    with mp.workprec(mp.prec + 64):
        return hi(x) - lo(x)


def hull(xs) -> Interval:
    xs = list(xs)
    return iv.mpf([min(lo(x) for x in xs), max(hi(x) for x in xs)])


def contains(x: Interval, value) -> bool:
    """True if ``value`` (a number or an exact Fraction) lies inside ``x``."""
    if isinstance(value, Fraction):
        return lo(x) * value.denominator <= value.numerator <= hi(x) * value.denominator
    return lo(x) <= value <= hi(x)


def overlaps(x: Interval, y: Interval) -> bool:
    return not (hi(x) < lo(y) or hi(y) < lo(x))


def compare_to_one(x: Interval) -> int:
    """+1 if certainly > 1, -1 if certainly < 1, 0 if 1 is inside."""
    if lo(x) > 1:
        return 1
    if hi(x) < 1:
        return -1
    return 0


def decimal(x: mpmath.mpf, digits: int = 30) -> str:
    return to_str(x._mpf_, digits)


def directed_decimal(x: mpmath.mpf, digits: int = 30, *, up: bool) -> str:
    """Decimal string rounded toward +inf (``up``) or -inf, so it stays an enclosure."""
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return "0"
    q = Fraction(int(man)) * (Fraction(2) ** int(exp))
    if sign:
        q = -q
    e10 = len(str(abs(q.numerator))) - len(str(q.denominator))
    while Fraction(10) ** e10 > abs(q):
        e10 -= 1
    while Fraction(10) ** (e10 + 1) <= abs(q):
        e10 += 1
    scaled = q * Fraction(10) ** (digits - 1 - e10)
    n = -((-scaled.numerator) // scaled.denominator) if up else scaled.numerator // scaled.denominator
    body = str(abs(n))
    if len(body) > digits:  # rounding carried into a new digit
        e10 += 1
        body = body[:digits]
    text = body[0] + ("." + body[1:].rstrip("0") if body[1:].rstrip("0") else "")
    return f"{'-' if n < 0 else ''}{text}e{e10:+d}"


def to_json(x: Interval, digits: int = 30) -> dict:
    return {
        "lo": directed_decimal(lo(x), digits, up=False),
        "hi": directed_decimal(hi(x), digits, up=True),
    }
