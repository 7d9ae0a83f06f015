"""Exponent bookkeeping for the d > 3k lower bound.

For d > 3k the margin |a_0| prod |a_i|^c_i - 1 is bounded below by a
constant times H^(-E + 1/(k(d-1))), where

    mu = ceil((ceil(d/3) - k) / 2)
    E  = max(2(d-1)(d-2), (d-1)(d-2)(d-3) / (2 mu)).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError


class Branch(enum.Enum):
    TWO_FACTOR = "TWO_FACTOR"
    THREE_FACTOR = "THREE_FACTOR"
    EQUAL = "EQUAL"


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class BoundsProfile:
    d: int
    k: int
    mu: int
    cal_e: Fraction
    branch: Branch
    predicted_exponent: Fraction

    @property
    def exceptional(self) -> bool:
        return self.branch is Branch.TWO_FACTOR

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "k": self.k,
            "mu": self.mu,
            "calE": str(self.cal_e),
            "branch": self.branch.value,
            "predictedExponent": str(self.predicted_exponent),
        }


def bounds_profile(d: int, k: int) -> BoundsProfile:
    if k < 1 or d <= 3 * k:
        raise InputError(f"hypothesis d > 3k fails for d={d}, k={k}")
    mu = _ceil_div(_ceil_div(d, 3) - k, 2)
    two = Fraction(2 * (d - 1) * (d - 2))
    three = Fraction((d - 1) * (d - 2) * (d - 3), 2 * mu)
    if two > three:
        branch = Branch.TWO_FACTOR
    elif three > two:
        branch = Branch.THREE_FACTOR
    else:
        branch = Branch.EQUAL
    cal_e = max(two, three)
    return BoundsProfile(d, k, mu, cal_e, branch, -cal_e + Fraction(1, k * (d - 1)))


def exceptional_set(*ranges: tuple[int, Iterable[int]]) -> list[tuple[int, int]]:
    """All (d, k) with a TWO_FACTOR branch; each range is (k, iterable of d)."""
    out = []
    for k, ds in ranges:
        for d in ds:
            if bounds_profile(d, k).branch is Branch.TWO_FACTOR:
                out.append((d, k))
    return sorted(out)


def bounds_table(d_max: int) -> list[BoundsProfile]:
    return [bounds_profile(d, k) for d in range(4, d_max + 1) for k in range(1, d) if d > 3 * k]


@dataclass(frozen=True)
class ExponentFit:
    samples: tuple[tuple[float, float], ...]  # (log H, log margin)
    slope: float
    intercept_ignored: bool = True

    def to_json(self) -> dict:
        return {"samples": [list(s) for s in self.samples], "slope": self.slope}


def fit_margin_exponent(samples: Sequence[tuple[float, float]]) -> ExponentFit:
    """Least-squares slope of log(margin) against log(height).

    Margins should be certified lower bounds so the fit is conservative.
    """
    if len(samples) < 3:
        raise InputError("need at least 3 samples")
    pts = []
    for height, margin in samples:
        if not margin > 0:
            raise InputError(f"margin lower bound {margin} is not positive")
        if not height > 0:
            raise InputError(f"height {height} is not positive")
        pts.append((math.log(height), math.log(margin)))
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if np.ptp(x) == 0:
        raise InputError("all samples share one height")
    slope, _ = np.polyfit(x, y, 1)
    if not math.isfinite(slope):
        raise InputError("fit produced a non-finite slope")
    return ExponentFit(tuple(pts), float(slope))
