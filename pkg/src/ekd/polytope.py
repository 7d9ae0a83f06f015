"""Exact-rational half-space systems and three independent vertex enumerations.

The systems have the shape

    a_i + a_i (x_1 + ... + x_{i-1}) - b_i (x_i + ... + x_k) >= 0,   i = 1..k
    x_j >= 0,                                                     j = 1..k

with positive a_i, b_i and the skew condition a_i b_j - a_j b_i > 0 for
i < j. Such a system has exactly 2^k vertices, one per subset I of
{1..k} (the vertex where L_i = 0 for i in I and x_j = 0 otherwise).

Subsets are encoded as bit masks with j = 1 in bit 0, and every VertexSet
lists its vertices in increasing mask order.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ConsistencyError, InputError, StructuralError
from .linalg import solve_unique

Point = tuple[Fraction, ...]


def mask_to_subset(mask: int, k: int) -> tuple[int, ...]:
    return tuple(j + 1 for j in range(k) if mask >> j & 1)


def subset_to_mask(subset: Iterable[int]) -> int:
    m = 0
    for j in subset:
        m |= 1 << (j - 1)
    return m


@dataclass(frozen=True)
class HalfSpaceSystem:
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    strict: bool = field(default=True, compare=False)

    def __post_init__(self):
        a = tuple(Fraction(v) for v in self.a)
        b = tuple(Fraction(v) for v in self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if len(a) != len(b) or not a:
            raise InputError("a and b must be nonempty and of equal length")
        if any(v <= 0 for v in a + b):
            raise InputError("all a_i and b_i must be positive")
        if self.strict:
            bad = self.skew_violation()
            if bad is not None:
                i, j = bad
                raise StructuralError(f"skew condition fails for rows {i} and {j}", pair=bad)

    @property
    def k(self) -> int:
        return len(self.a)

    def skew_violation(self) -> tuple[int, int] | None:
        for i in range(self.k):
            for j in range(i + 1, self.k):
                if self.a[i] * self.b[j] - self.a[j] * self.b[i] <= 0:
                    return (i + 1, j + 1)
        return None

    def row(self, i: int) -> tuple[list[Fraction], Fraction]:
        """Coefficients and constant of L_i (1-indexed): L_i(x) = coeffs . x + const."""
        ai, bi = self.a[i - 1], self.b[i - 1]
        return [ai if j < i else -bi for j in range(1, self.k + 1)], ai

    def evaluate(self, i: int, x: Sequence[Fraction]) -> Fraction:
        coeffs, const = self.row(i)
        return const + sum(c * v for c, v in zip(coeffs, x))


def ekd_half_spaces(k: int, d: int) -> HalfSpaceSystem:
    """The system cutting out E_{k,d}: a_j = (d - j)/j, b_j = 1."""
    if not (d > k >= 1):
        raise InputError(f"need d > k >= 1, got k={k}, d={d}")
    return HalfSpaceSystem(
        tuple(Fraction(d - j, j) for j in range(1, k + 1)),
        tuple(Fraction(1) for _ in range(k)),
    )


@dataclass(frozen=True)
class Vertex:
    subset: tuple[int, ...]
    point: Point


@dataclass(frozen=True)
class VertexSet:
    k: int
    vertices: tuple[Vertex, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def points(self) -> list[Point]:
        return [v.point for v in self.vertices]

    def labeled(self) -> set[tuple[tuple[int, ...], Point]]:
        return {(v.subset, v.point) for v in self.vertices}

    def by_subset(self, subset: Iterable[int]) -> Point:
        s = tuple(sorted(subset))
        for v in self.vertices:
            if v.subset == s:
                return v.point
        raise KeyError(s)

    def to_json(self) -> str:
        return json.dumps([{"J": list(v.subset), "v": [str(c) for c in v.point]} for v in self.vertices])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["J"] + [f"x{j}" for j in range(1, self.k + 1)])
        for v in self.vertices:
            w.writerow([" ".join(map(str, v.subset))] + [str(c) for c in v.point])
        return buf.getvalue()


def _ordered(k: int, found: dict[int, Point]) -> VertexSet:
    return VertexSet(k, tuple(Vertex(mask_to_subset(m, k), found[m]) for m in sorted(found)))


# --------------------------------------------------------------------------
# path 1: closed form


def closed_form_vertex(k: int, d: int, subset: Iterable[int]) -> Point:
    js = sorted(subset)
    v = [Fraction(0)] * k
    if not js:
        return tuple(v)
    first = js[0]
    for cur, nxt in zip(js, js[1:]):
        v[cur - 1] = Fraction(nxt - cur, first)
    v[js[-1] - 1] = Fraction(d - js[-1], first)
    return tuple(v)


def vertices_closed_form(k: int, d: int) -> VertexSet:
    if not (d > k >= 1):
        raise InputError(f"need d > k >= 1, got k={k}, d={d}")
    return _ordered(k, {m: closed_form_vertex(k, d, mask_to_subset(m, k)) for m in range(1 << k)})


# --------------------------------------------------------------------------
# path 2: recursive elimination of the last coordinate


def _eliminate(a: list[Fraction], b: list[Fraction]) -> dict[int, Point]:
    k = len(a)
    if k == 1:
        return {0: (Fraction(0),), 1: (a[0] / b[0],)}
    out: dict[int, Point] = {}
    # last coordinate not in the subset: x_k = 0, drop row k
    for m, s in _eliminate(a[:-1], b[:-1]).items():
        out[m] = s + (Fraction(0),)
    # last coordinate in the subset: x_k = (a_k/b_k)(1 + x_1 + ... + x_{k-1})
    t = a[-1] / b[-1]
    a2 = [ai - bi * t for ai, bi in zip(a[:-1], b[:-1])]
    b2 = [bi * (1 + t) for bi in b[:-1]]
    for i, v in enumerate(a2):
        if v <= 0:
            raise StructuralError(f"skew condition fails for rows {i + 1} and {k}", pair=(i + 1, k))
    for i in range(k - 1):
        for j in range(i + 1, k - 1):
            before = a[i] * b[j] - a[j] * b[i]
            after = a2[i] * b2[j] - a2[j] * b2[i]
            if after != before * (1 + t) or after <= 0:
                raise StructuralError(f"elimination broke the skew condition for rows {i + 1} and {j + 1}",
                                      pair=(i + 1, j + 1))
    top = 1 << (k - 1)
    for m, s in _eliminate(a2, b2).items():
        out[m | top] = s + (t * (1 + sum(s)),)
    return out


def vertices_by_elimination(system: HalfSpaceSystem) -> VertexSet:
    return _ordered(system.k, _eliminate(list(system.a), list(system.b)))


# --------------------------------------------------------------------------
# path 3: brute force over all subset systems


@dataclass(frozen=True)
class Membership:
    member: bool
    row_slacks: tuple[Fraction, ...]
    violation: tuple[str, int, Fraction] | None = None  # ("row" | "nonneg", index, value)


def contains(system: HalfSpaceSystem, point: Sequence[Fraction]) -> Membership:
    if len(point) != system.k:
        raise InputError(f"point has dimension {len(point)}, system has {system.k}")
    x = [Fraction(v) for v in point]
    slacks = tuple(system.evaluate(i, x) for i in range(1, system.k + 1))
    for i, s in enumerate(slacks, 1):
        if s < 0:
            return Membership(False, slacks, ("row", i, s))
    for j, v in enumerate(x, 1):
        if v < 0:
            return Membership(False, slacks, ("nonneg", j, v))
    return Membership(True, slacks)


def _subsystem(system: HalfSpaceSystem, eq_rows: Iterable[int], zero_coords: Iterable[int]):
    mat, rhs = [], []
    for i in eq_rows:
        coeffs, const = system.row(i)
        mat.append(coeffs)
        rhs.append(-const)
    for j in zero_coords:
        mat.append([Fraction(int(t == j)) for t in range(1, system.k + 1)])
        rhs.append(Fraction(0))
    return mat, rhs


def vertices_brute_force(system: HalfSpaceSystem) -> VertexSet:
    k = system.k
    found: dict[int, Point] = {}
    for m in range(1 << k):
        eq = mask_to_subset(m, k)
        zero = [j for j in range(1, k + 1) if j not in eq]
        x = solve_unique(*_subsystem(system, eq, zero))
        if x is None or not contains(system, x).member:
            continue
        found[m] = tuple(x)
    if len(found) != 1 << k or len(set(found.values())) != len(found):
        raise ConsistencyError(f"brute force found {len(found)} vertices, expected {1 << k}")
    return _ordered(k, found)


def vertex_identity_check(k: int, d: int, subset: Iterable[int]) -> bool:
    """Exact check that the closed-form vertex solves its defining equalities."""
    js = set(subset)
    if not js <= set(range(1, k + 1)):
        raise InputError(f"subset {sorted(js)} not inside 1..{k}")
    system = ekd_half_spaces(k, d)
    v = closed_form_vertex(k, d, js)
    for j in range(1, k + 1):
        if j in js and system.evaluate(j, v) != 0:
            return False
        if j not in js and v[j - 1] != 0:
            return False
    return True


def mixed_subsystems_infeasible(system: HalfSpaceSystem, vertices: VertexSet | None = None) -> bool:
    """No point of P has L_i = 0 and x_i = 0 for the same i.

    Checks every system {L_i = 0, i in I} + {x_j = 0, j in J} with
    |I| + |J| = k and I, J overlapping. A unique solution must violate some
    inequality; a singular system cuts out a face of P, which is empty iff
    it contains none of P's vertices.
    """
    k = system.k
    verts = vertices if vertices is not None else vertices_brute_force(system)
    coords = range(1, k + 1)
    for n_eq in range(1, k):
        for eq in combinations(coords, n_eq):
            for zero in combinations(coords, k - n_eq):
                if not set(eq) & set(zero):
                    continue
                x = solve_unique(*_subsystem(system, eq, zero))
                if x is not None:
                    if contains(system, x).member:
                        return False
                    continue
                for v in verts:
                    if all(system.evaluate(i, v.point) == 0 for i in eq) and all(v.point[j - 1] == 0 for j in zero):
                        return False
    return True
