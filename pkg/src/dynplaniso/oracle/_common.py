from __future__ import annotations

from typing import Iterable, Protocol


class _EdgeSource(Protocol):
    vertices: Iterable[int]
    edges: Iterable[tuple[int, int]]


def adjacency(g) -> dict[int, set[int]]:
    """Plain adjacency sets from a DynamicGraph, a StaticGraph or a (vertices, edges) tuple."""
    if isinstance(g, tuple):
        vertices, edges = g
    elif callable(getattr(g, "edges", None)):
        vertices, edges = range(g.n), list(g.edges())
    else:
        vertices, edges = g.vertices, g.edges
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def reach(adj: dict[int, set[int]], start: int, banned: Iterable[int] = ()) -> set[int]:
    ban = set(banned)
    if start in ban:
        return set()
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen and y not in ban:
                seen.add(y)
                stack.append(y)
    return seen


def pieces(adj: dict[int, set[int]], keep: Iterable[int]) -> list[set[int]]:
    """Connected pieces of the subgraph induced on ``keep``."""
    left = set(keep)
    out = []
    while left:
        s = min(left)
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in left and y not in seen:
                    seen.add(y)
                    stack.append(y)
        left -= seen
        out.append(seen)
    return out
