"""Certified complex roots, sorted modulus profiles and annulus counts.

Roots are found in two stages: a machine-precision Aberth-Ehrlich iteration
seeded from the Newton polygon, then Aberth sweeps in mpmath at the working
precision. The resulting centers are rounded to a common dyadic grid and
certified with exact integer arithmetic using the Weierstrass inclusion
theorem: if ``W_i = p(z_i) / (lc * prod_{j != i} (z_i - z_j))`` then the
disks ``D(z_i, d |W_i|)`` cover every root, and each connected component
made of m disks holds exactly m roots. Pairwise disjoint disks therefore
isolate one root each.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Sequence

import numpy as np
from mpmath import iv, mp

from . import intervals as ivl
from .errors import BoundaryOverlapError, CertificationError, InputError, NotSquarefreeError
from .polynomial import IntPolynomial, TrinomialSpec, squarefree_gcd

DEFAULT_BITS = 128
PRECISION_CAP = 4096
LADDER = (53, 128, 256, 512, 1024, 2048, 4096)


def ladder_from(bits: int, cap: int = PRECISION_CAP):
    """Precisions tried when escalating from ``bits`` up to ``cap``."""
    yield bits
    b = bits
    for step in LADDER:
        if step > b and step <= cap:
            yield step
            b = step
    while b * 2 <= cap:
        b *= 2
        yield b


# --------------------------------------------------------------------------
# enclosures


@dataclass(frozen=True)
class RootEnclosure:
    """Disk ``|z - (re + i im) 2^-exp| <= rad 2^-exp`` holding exactly one root."""

    re: int
    im: int
    rad: int
    exp: int
    precision_bits: int

    @property
    def center(self):
        return mp.mpc(ivl.dyadic(self.re, -self.exp), ivl.dyadic(self.im, -self.exp))

    @property
    def radius(self):
        return ivl.dyadic(self.rad, -self.exp)

    def modulus_interval(self) -> ivl.Interval:
        m2 = self.re * self.re + self.im * self.im
        s = isqrt(m2)
        up = s if s * s == m2 else s + 1
        return ivl.dyadic_interval(max(0, s - self.rad), up + self.rad, -self.exp)

    def contains(self, z) -> bool:
        """Whether the point z (any mpmath-convertible number) lies in the disk."""
        with mp.workprec(self.exp + max(self.re.bit_length(), self.im.bit_length()) + 64):
            w = mp.mpc(z) * mp.ldexp(1, self.exp) - mp.mpc(self.re, self.im)
            return abs(w) <= self.rad

    def to_json(self, digits: int = 40) -> dict:
        c = self.center
        return {
            "re": ivl.decimal(c.real, digits),
            "im": ivl.decimal(c.imag, digits),
            "radius": ivl.directed_decimal(self.radius, 6, up=True),
            "bits": self.precision_bits,
        }


def _newton_polygon_seeds(coeffs: Sequence[int], sigma: float = 0.7) -> np.ndarray:
    d = len(coeffs) - 1
    pts = [(i, math.log(abs(c))) for i, c in enumerate(coeffs) if c]
    hull: list[tuple[int, float]] = []
    for p in pts:  # upper hull, monotone chain
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    seeds = []
    for (i, li), (j, lj) in zip(hull, hull[1:]):
        n = j - i
        r = math.exp((li - lj) / n)
        for m in range(n):
            theta = 2 * math.pi * m / n + 2 * math.pi * i / d + sigma
            seeds.append(r * complex(math.cos(theta), math.sin(theta)))
    # a zero constant term leaves a root at 0 below the hull's first vertex
    seeds.extend([1e-3 * complex(1, 1)] * (d - len(seeds)))
    return np.array(seeds, dtype=complex)


def _aberth_float(coeffs: Sequence[int], maxiter: int = 800) -> np.ndarray | None:
    a = np.array([float(c) for c in reversed(coeffs)], dtype=complex)
    da = np.polyder(a)
    z = _newton_polygon_seeds(coeffs)
    n = len(z)
    if n == 1:
        return np.array([-a[1] / a[0]])
    tol = 2.0 ** -40
    with np.errstate(all="ignore"):
        for _ in range(maxiter):
            pz = np.polyval(a, z)
            dpz = np.polyval(da, z)
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = (1.0 / diff).sum(axis=1)
            step = ratio / (1.0 - ratio * s)
            step[pz == 0] = 0
            if not np.all(np.isfinite(step)):
                return None
            z = z - step
            if np.all(np.abs(step) <= tol * np.maximum(np.abs(z), 1e-300)):
                break
    return z


def _aberth_mp(coeffs: Sequence[int], z, prec: int, max_sweeps: int = 200):
    """Gauss-Seidel Aberth sweeps at ``prec`` bits."""
    with mp.workprec(prec):
        a = [mp.mpf(c) for c in reversed(coeffs)]
        z = [mp.mpc(x) for x in z]
        n = len(z)
        tol = mp.ldexp(1, -prec + 12)
        for _ in range(max_sweeps):
            worst = mp.zero
            for i in range(n):
                zi = z[i]
                p = a[0]
                dp = mp.zero
                for c in a[1:]:
                    dp = dp * zi + p
                    p = p * zi + c
                if p == 0:
                    continue
                ratio = p / dp
                s = mp.zero
                for j in range(n):
                    if j != i:
                        s += 1 / (zi - z[j])
                step = ratio / (1 - ratio * s)
                z[i] = zi - step
                rel = abs(step) / max(1, abs(z[i]))
                if rel > worst:
                    worst = rel
            if worst < tol:
                break
        return z


def _symmetrize(z):
    """Force exact conjugate symmetry: real roots get im = 0, pairs mirror."""
    n = len(z)
    out = list(z)
    used = [False] * n
    for i in range(n):
        if used[i]:
            continue
        ci = mp.conj(z[i])
        best, best_d = i, abs(z[i] - ci)
        for j in range(n):
            if j != i and not used[j]:
                dj = abs(z[j] - ci)
                if dj < best_d:
                    best, best_d = j, dj
        if best == i:
            out[i] = mp.mpc(z[i].real, 0)
            used[i] = True
        else:
            avg = (z[i] + mp.conj(z[best])) / 2
            if avg.imag < 0:
                avg = mp.conj(avg)
            out[i], out[best] = avg, mp.conj(avg)
            used[i] = used[best] = True
    return out


def _to_grid(z, prec: int) -> tuple[list[tuple[int, int]], int]:
    mags = [mp.mag(x) for x in z if x != 0]
    low = min(mags) if mags else 0
    e = prec + max(0, -int(low))
    scale = mp.ldexp(1, e)
    with mp.workprec(prec + e + 64):
        pts = [(int(mp.nint(x.real * scale)), int(mp.nint(x.imag * scale))) for x in z]
    return pts, e


def _certify(coeffs: Sequence[int], pts: list[tuple[int, int]], e: int) -> list[int] | None:
    """Exact Weierstrass radii on the 2^-e grid, or None if disks are not disjoint."""
    d = len(coeffs) - 1
    lc = coeffs[-1]
    s = 1 << e
    spow = [1]
    for _ in range(d):
        spow.append(spow[-1] * s)
    radii = []
    for i, (xr, xi) in enumerate(pts):
        gr, gi = lc, 0
        for m in range(1, d + 1):
            c = coeffs[d - m] * spow[m]
            gr, gi = gr * xr - gi * xi + c, gr * xi + gi * xr
        num = gr * gr + gi * gi
        den = lc * lc
        for j, (yr, yi) in enumerate(pts):
            if j != i:
                dr, di = xr - yr, xi - yi
                q = dr * dr + di * di
                if q == 0:
                    return None
                den *= q
        # (rad)^2 >= d^2 |W|^2 2^{2e} = d^2 num / den
        q2 = -((-d * d * num) // den)
        r = isqrt(q2)
        if r * r < q2:
            r += 1
        radii.append(r)
    for i in range(d):
        xr, xi = pts[i]
        for j in range(i + 1, d):
            dr, di = xr - pts[j][0], xi - pts[j][1]
            if dr * dr + di * di <= (radii[i] + radii[j]) ** 2:
                return None
    return radii


def _radius_ok(pt: tuple[int, int], rad: int, e: int, target: int) -> bool:
    # rad 2^-e <= 2^-target max(1, |z|)
    m2 = pt[0] * pt[0] + pt[1] * pt[1]
    return rad * rad << (2 * target) <= max(1 << (2 * e), m2)


def solve_roots(p: IntPolynomial, target_bits: int = DEFAULT_BITS, cap: int = PRECISION_CAP) -> tuple[RootEnclosure, ...]:
    """Certified enclosures of all roots of a squarefree integer polynomial."""
    return _solve_cached(p, int(target_bits), int(cap))


@lru_cache(maxsize=4096)
def _solve_cached(p: IntPolynomial, target_bits: int, cap: int) -> tuple[RootEnclosure, ...]:
    if p.degree < 1:
        raise InputError("solve_roots needs degree >= 1")
    if target_bits > cap:
        raise InputError(f"target precision {target_bits} exceeds the cap {cap}")
    if p.degree > 1:
        g = squarefree_gcd(p)
        if g.degree > 0:
            raise NotSquarefreeError(g)
    coeffs = p.coeffs
    d = p.degree
    z = _aberth_float(coeffs)
    if z is None:
        z = _aberth_mp(coeffs, _newton_polygon_seeds(coeffs), 64, max_sweeps=2000)
    guard = 24 + 2 * d.bit_length()
    work = target_bits + guard
    while work <= 2 * cap + guard:
        z = _aberth_mp(coeffs, z, work)
        with mp.workprec(work):
            z = _symmetrize(z)
        pts, e = _to_grid(z, work)
        radii = _certify(coeffs, pts, e)
        if radii is not None and all(_radius_ok(pt, r, e, target_bits) for pt, r in zip(pts, radii)):
            return tuple(RootEnclosure(x, y, r, e, target_bits) for (x, y), r in zip(pts, radii))
        work *= 2
    raise CertificationError(f"could not certify the roots of {p} below {cap} bits", bits=cap)


# --------------------------------------------------------------------------
# modulus profile


@dataclass(frozen=True)
class ModulusProfile:
    """Conjugates sorted by descending modulus, with certified intervals.

    ``partner[i]`` is the index of the complex conjugate of root i (itself
    for real roots). ``tied_groups`` partitions the positions into maximal
    runs of overlapping modulus intervals; anything computed from the
    profile uses :meth:`position` so it does not depend on the order inside
    a group.
    """

    roots: tuple[RootEnclosure, ...]
    moduli: tuple[ivl.Interval, ...]
    tied_groups: tuple[tuple[int, ...], ...]
    partner: tuple[int, ...]
    bits: int
    poly: IntPolynomial | None = field(default=None, compare=False)
    cap: int = PRECISION_CAP

    @property
    def degree(self) -> int:
        return len(self.roots)

    def group_of(self, i: int) -> tuple[int, ...]:
        for g in self.tied_groups:
            if i in g:
                return g
        raise IndexError(i)

    def position(self, i: int) -> ivl.Interval:
        """Certified interval for the i-th largest modulus."""
        g = self.group_of(i)
        if len(g) == 1:
            return self.moduli[i]
        return ivl.hull(self.moduli[k] for k in g)

    def is_real(self, i: int) -> bool:
        return self.partner[i] == i

    def can_refine(self) -> bool:
        return self.poly is not None and self.bits * 2 <= self.cap

    def refine(self) -> "ModulusProfile":
        if not self.can_refine():
            raise CertificationError("precision cap reached", bits=self.bits)
        return modulus_profile(self.poly, self.bits * 2, self.cap)

    def to_json(self) -> dict:
        with ivl.precision(self.bits + 32):
            return {
                "degree": self.degree,
                "bits": self.bits,
                "moduli": [ivl.to_json(m, 25) for m in self.moduli],
                "tiedGroups": [list(g) for g in self.tied_groups],
                "real": [self.is_real(i) for i in range(self.degree)],
            }


def _pairing(roots: Sequence[RootEnclosure]) -> list[int] | None:
    """Conjugate partner of each disk, decided from disk geometry alone.

    The mirror image of a disk holds the conjugate root, which lies in some
    disk; if the mirror meets exactly one disk, that disk is the partner.
    """
    out = []
    for i, a in enumerate(roots):
        hits = []
        for j, b in enumerate(roots):
            dr, di = a.re - b.re, -a.im - b.im
            if dr * dr + di * di <= (a.rad + b.rad) ** 2:
                hits.append(j)
        if len(hits) != 1:
            return None
        out.append(hits[0])
    return out


def sorted_moduli(roots: Sequence[RootEnclosure], poly: IntPolynomial | None = None,
                  cap: int = PRECISION_CAP) -> ModulusProfile:
    """Sort enclosures by descending modulus and group overlapping intervals."""
    roots = list(roots)
    if len({r.exp for r in roots}) != 1:
        raise InputError("enclosures must come from one solve")
    bits = roots[0].precision_bits
    roots.sort(key=lambda r: (-(r.re * r.re + r.im * r.im), -r.re, -r.im))
    partner = _pairing(roots)
    if partner is None:
        if poly is not None and bits * 2 <= cap:
            return modulus_profile(poly, bits * 2, cap)
        raise CertificationError("cannot decide conjugate pairing", bits=bits)
    moduli = [r.modulus_interval() for r in roots]
    groups: list[list[int]] = [[0]]
    run_lo = ivl.lo(moduli[0])
    for i in range(1, len(roots)):
        if ivl.hi(moduli[i]) >= run_lo:
            groups[-1].append(i)
            run_lo = min(run_lo, ivl.lo(moduli[i]))
        else:
            groups.append([i])
            run_lo = ivl.lo(moduli[i])
    return ModulusProfile(
        roots=tuple(roots),
        moduli=tuple(moduli),
        tied_groups=tuple(tuple(g) for g in groups),
        partner=tuple(partner),
        bits=bits,
        poly=poly,
        cap=cap,
    )


@lru_cache(maxsize=4096)
def modulus_profile(p: IntPolynomial, bits: int = DEFAULT_BITS, cap: int = PRECISION_CAP) -> ModulusProfile:
    return sorted_moduli(solve_roots(p, bits, cap), p, cap)


# --------------------------------------------------------------------------
# annuli


@dataclass(frozen=True)
class RadicalBound:
    """The positive real ``base ** exponent`` with exact rational data."""

    base: Fraction
    exponent: Fraction = Fraction(1)

    def interval(self) -> ivl.Interval:
        b = ivl.from_fraction(self.base)
        if self.exponent == 1:
            return b
        return iv.exp(ivl.from_fraction(self.exponent) * iv.log(b))

    def __float__(self) -> float:
        return float(self.base) ** float(self.exponent)

    def __repr__(self) -> str:
        return f"({self.base})^({self.exponent})" if self.exponent != 1 else str(self.base)


def _as_bound(x) -> RadicalBound:
    if isinstance(x, RadicalBound):
        return x
    if isinstance(x, float):
        return RadicalBound(Fraction(x))
    return RadicalBound(Fraction(x))


@dataclass(frozen=True)
class AnnulusPrediction:
    inner_low: RadicalBound
    inner_high: RadicalBound
    outer_low: RadicalBound
    outer_high: RadicalBound
    inner_count: int
    outer_count: int


def predicted_annuli(spec: TrinomialSpec, epsilon) -> AnnulusPrediction:
    """Root annuli of x^d - h x^j + 1 for an admissible epsilon."""
    eps = Fraction(epsilon) if not isinstance(epsilon, float) else Fraction(str(epsilon))
    h = abs(spec.h)
    if h < 3:
        raise InputError("annulus prediction needs |h| >= 3")
    if not (Fraction(1, h) < eps < 1 - Fraction(1, h)):
        raise InputError(f"epsilon {eps} outside the admissible range (1/{h}, 1 - 1/{h})")
    d, j = spec.d, spec.j
    return AnnulusPrediction(
        inner_low=RadicalBound((1 + eps) * h, Fraction(-1, j)),
        inner_high=RadicalBound((1 - eps) * h, Fraction(-1, j)),
        outer_low=RadicalBound((1 - eps) * h, Fraction(1, d - j)),
        outer_high=RadicalBound((1 + eps) * h, Fraction(1, d - j)),
        inner_count=j,
        outer_count=d - j,
    )


def count_in_annulus(profile: ModulusProfile, r_low, r_high) -> int:
    """Number of roots with r_low < |z| < r_high, refining on boundary contact."""
    lo_b, hi_b = _as_bound(r_low), _as_bound(r_high)
    if not float(lo_b) > 0 or not float(hi_b) > float(lo_b):
        raise InputError("need 0 < r_low < r_high")
    while True:
        with ivl.precision(profile.bits + 32):
            a, b = lo_b.interval(), hi_b.interval()
            count, clash = 0, None
            for i, m in enumerate(profile.moduli):
                if ivl.overlaps(m, a) or ivl.overlaps(m, b):
                    clash = i
                    break
                if ivl.lo(m) > ivl.hi(a) and ivl.hi(m) < ivl.lo(b):
                    count += 1
        if clash is None:
            return count
        if not profile.can_refine():
            raise BoundaryOverlapError(
                f"modulus {clash} meets an annulus boundary at {profile.bits} bits",
                bits=profile.bits, index=clash)
        profile = profile.refine()


def cauchy_root_bound(p: IntPolynomial) -> int:
    if not p.is_monic:
        raise InputError("Cauchy bound H + 1 assumes a monic polynomial")
    return p.height + 1
