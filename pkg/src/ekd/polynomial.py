"""Exact integer polynomials, the trinomial family and structural predicates."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import InputError


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial; ``coeffs[i]`` is the coefficient of x^i.

    Trailing zeros are stripped on construction, so ``degree`` is always the
    index of the last nonzero coefficient.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = [int(c) for c in self.coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs or cs == [0]:
            raise InputError("the zero polynomial is not supported")
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntPolynomial":
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coeffs)

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0]

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            raise InputError("derivative of a constant")
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if a == 1 else f"{a}{mono}"
            terms.append((sign, body))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def to_csv(self) -> str:
        return ",".join(str(c) for c in self.coeffs)


_TERM = re.compile(r"^([+-]?)(\d*)\*?(?:(x)(?:\^(\d+))?)?$")


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse ``"1,0,-10,0,0,1"`` (constant first) or ``"x^5 - 10x^2 + 1"``."""
    s = text.strip()
    if not s:
        raise InputError("empty polynomial")
    if "x" not in s:
        try:
            return IntPolynomial(tuple(int(t) for t in s.split(",")))
        except ValueError as exc:
            raise InputError(f"cannot parse coefficient list {text!r}") from exc
    s = s.replace(" ", "").replace("**", "^")
    coeffs: dict[int, int] = {}
    for term in re.findall(r"[+-]?[^+-]+", s):
        m = _TERM.match(term)
        if not m or (not m.group(2) and not m.group(3)):
            raise InputError(f"cannot parse term {term!r} in {text!r}")
        sign, digits, var, power = m.groups()
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        e = 0 if var is None else int(power or 1)
        coeffs[e] = coeffs.get(e, 0) + c
    top = max(coeffs)
    return IntPolynomial(tuple(coeffs.get(i, 0) for i in range(top + 1)))


@dataclass(frozen=True)
class TrinomialSpec:
    d: int
    j: int
    h: int

    def __post_init__(self):
        if not (self.d > self.j > 0):
            raise InputError(f"trinomial needs d > j > 0, got d={self.d}, j={self.j}")


def make_trinomial(spec: TrinomialSpec | tuple[int, int, int]) -> IntPolynomial:
    """x^d - h x^j + 1."""
    if not isinstance(spec, TrinomialSpec):
        spec = TrinomialSpec(*spec)
    cs = [0] * (spec.d + 1)
    cs[0] = 1
    cs[spec.j] = -spec.h
    cs[spec.d] = 1
    return IntPolynomial(tuple(cs))


def reciprocal(p: IntPolynomial) -> IntPolynomial:
    if p.constant == 0:
        raise InputError("reciprocal needs a nonzero constant term")
    return IntPolynomial(p.coeffs[::-1])


def _require_monic(p: IntPolynomial, what: str) -> None:
    if not p.is_monic:
        raise InputError(f"{what} requires a monic polynomial, got leading coefficient {p.leading}")


def is_unit_polynomial(p: IntPolynomial) -> bool:
    _require_monic(p, "unit test")
    return abs(p.constant) == 1


def poly_divmod(num: IntPolynomial, den: IntPolynomial) -> tuple[list[Fraction], list[Fraction]]:
    """Division over Q. Returns quotient and remainder as Fraction lists (constant first)."""
    r = [Fraction(c) for c in num.coeffs]
    q = [Fraction(0)] * max(1, num.degree - den.degree + 1)
    lead = den.leading
    for shift in range(num.degree - den.degree, -1, -1):
        c = r[shift + den.degree] / lead
        q[shift] = c
        if c:
            for i, b in enumerate(den.coeffs):
                r[shift + i] -= c * b
    rem = r[: den.degree] or [Fraction(0)]
    return q, rem


def divides(den: IntPolynomial, num: IntPolynomial) -> bool:
    """True iff ``num = den * q`` for some integer polynomial q."""
    if den.degree > num.degree:
        return False
    q, rem = poly_divmod(num, den)
    return all(c == 0 for c in rem) and all(c.denominator == 1 for c in q)


def exact_quotient(num: IntPolynomial, den: IntPolynomial) -> IntPolynomial:
    q, rem = poly_divmod(num, den)
    if any(rem) or any(c.denominator != 1 for c in q):
        raise InputError(f"{den} does not divide {num} over the integers")
    return IntPolynomial(tuple(int(c) for c in q))


def _primitive(cs: Sequence[Fraction]) -> IntPolynomial:
    den = 1
    for c in cs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in cs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return IntPolynomial(tuple(ints))


def poly_gcd(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Primitive gcd over Q with positive leading coefficient."""
    a = [Fraction(c) for c in p.coeffs]
    b = [Fraction(c) for c in q.coeffs]
    while any(b):
        while b and b[-1] == 0:
            b.pop()
        r = a[:]
        while len(r) >= len(b) and any(r):
            c = r[-1] / b[-1]
            off = len(r) - len(b)
            for i, bc in enumerate(b):
                r[off + i] -= c * bc
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        a, b = b, (r or [Fraction(0)])
    return _primitive(a)


def squarefree_gcd(p: IntPolynomial) -> IntPolynomial:
    return poly_gcd(p, p.derivative())


def is_root_of_unity_poly(p: IntPolynomial) -> bool:
    """True iff p divides x^N - 1 for some N <= 2 d^2 (exact arithmetic).

    Works by tracking x^N mod p; p is monic so the reduction stays integral.
    """
    _require_monic(p, "root-of-unity test")
    d = p.degree
    if d == 0:
        return False
    low = p.coeffs[:-1]
    r = [0] * d
    r[0] = 1  # x^0 mod p
    for _ in range(2 * d * d):
        top = r[-1]
        r = [0] + r[:-1]
        if top:
            for i, c in enumerate(low):
                r[i] -= top * c
        if r[0] == 1 and not any(r[1:]):
            return True
    return False
