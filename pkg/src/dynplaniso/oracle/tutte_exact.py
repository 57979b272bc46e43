"""Exact rational solution of the Tutte system."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import Singular, SizeLimit
from ._common import adjacency

TUTTE_SIZE_LIMIT = 10

DEFAULT_POSITIONS = ((0, 0), (1, 0), (0, 1))


def _solve(a: list[list[Fraction]], rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    m = [row[:] + r[:] for row, r in zip(a, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise Singular("Tutte matrix is singular over the rationals")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def oracle_tutte_exact(
    h,
    pins: Sequence[int],
    positions: Sequence[tuple[int, int] | tuple[Fraction, Fraction]] = DEFAULT_POSITIONS,
    limit: int = TUTTE_SIZE_LIMIT,
) -> dict[int, tuple[Fraction, Fraction]]:
    """Solve T x = b, T y = b exactly; returns vertex -> (x, y)."""
    adj = adjacency(h)
    verts = sorted(adj)
    if len(verts) > limit:
        raise SizeLimit(f"exact Tutte solver limited to {limit} vertices")
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    pos = {p: (Fraction(x), Fraction(y)) for p, (x, y) in zip(pins, positions)}
    a = [[Fraction(0)] * n for _ in range(n)]
    rhs = [[Fraction(0), Fraction(0)] for _ in range(n)]
    for v in verts:
        i = idx[v]
        if v in pos:
            a[i][i] = Fraction(1)
            rhs[i] = list(pos[v])
            continue
        a[i][i] = Fraction(len(adj[v]))
        for w in adj[v]:
            a[i][idx[w]] -= 1
    sol = _solve(a, rhs)
    return {v: (sol[idx[v]][0], sol[idx[v]][1]) for v in verts}


def tutte_determinant(h, pins: Sequence[int]) -> Fraction:
    """Exact determinant of the Tutte matrix (fraction-free via Fractions)."""
    adj = adjacency(h)
    verts = sorted(adj)
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    a = [[Fraction(0)] * n for _ in range(n)]
    for v in verts:
        i = idx[v]
        if v in pins:
            a[i][i] = Fraction(1)
            continue
        a[i][i] = Fraction(len(adj[v]))
        for w in adj[v]:
            a[i][idx[w]] -= 1
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det
