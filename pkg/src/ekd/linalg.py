"""Fraction-free Gaussian elimination over the integers (Bareiss)."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    """Scale each rational row by the lcm of its denominators."""
    out = []
    for row in rows:
        m = 1
        for v in row:
            m = lcm(m, Fraction(v).denominator)
        out.append([int(Fraction(v) * m) for v in row])
    return out


def solve_unique(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve the square system ``a x = b`` exactly; None if it is singular.

    Elimination runs on the augmented integer matrix with Bareiss's
    one-step division, so every intermediate entry is a minor of the input
    and stays an integer. Back substitution is done in Fractions.
    """
    n = len(a)
    m = integer_rows([list(r) + [v] for r, v in zip(a, b)])
    prev = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if m[r][k] != 0), None)
        if piv is None:
            return None
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(m[i][n])
        for j in range(i + 1, n):
            s -= m[i][j] * x[j]
        x[i] = s / m[i][i]
    return x
