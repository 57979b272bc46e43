"""Backtracking isomorphism search with colour refinement pruning."""

from __future__ import annotations

from typing import Mapping

from ..errors import SizeLimit
from ._common import adjacency

ISO_SIZE_LIMIT = 14


def _refine(adj: dict, labels: dict) -> dict:
    """Colour refinement until stable; keys are (graph tag, vertex)."""
    while True:
        sig = {x: (labels[x], tuple(sorted(labels[y] for y in adj[x]))) for x in adj}
        palette = {s: i for i, s in enumerate(sorted(set(sig.values()), key=repr))}
        new = {x: palette[sig[x]] for x in adj}
        if len(set(new.values())) == len(set(labels.values())):
            return new
        labels = new


def oracle_iso(
    g1,
    g2,
    constraints: Mapping[int, int] | None = None,
    colours1: Mapping[int, int] | None = None,
    colours2: Mapping[int, int] | None = None,
    limit: int = ISO_SIZE_LIMIT,
) -> dict[int, int] | None:
    """Some isomorphism ``g1 -> g2`` extending ``constraints`` and preserving colours."""
    a1, a2 = adjacency(g1), adjacency(g2)
    if max(len(a1), len(a2)) > limit:
        raise SizeLimit(f"oracle_iso limited to {limit} vertices")
    if len(a1) != len(a2):
        return None
    if sum(map(len, a1.values())) != sum(map(len, a2.values())):
        return None
    cons = dict(constraints or {})
    if any(a not in a1 or b not in a2 for a, b in cons.items()):
        return None
    if len(set(cons.values())) != len(cons):
        return None
    c1 = colours1 or {}
    c2 = colours2 or {}
    rank = {a: i for i, a in enumerate(sorted(cons))}
    union: dict = {}
    labels: dict = {}
    for tag, adj, col, pin in ((0, a1, c1, {a: rank[a] for a in cons}), (1, a2, c2, {b: rank[a] for a, b in cons.items()})):
        for v, nb in adj.items():
            union[(tag, v)] = [(tag, w) for w in nb]
            labels[(tag, v)] = (col.get(v, 0), len(nb), pin.get(v, -1))
    lab = _refine(union, labels)
    left = {v: lab[(0, v)] for v in a1}
    right = {v: lab[(1, v)] for v in a2}
    if sorted(left.values()) != sorted(right.values()):
        return None
    by_label: dict[int, list[int]] = {}
    for v, c in right.items():
        by_label.setdefault(c, []).append(v)

    # visit order: constrained vertices first, then BFS so each new vertex has mapped neighbours
    order: list[int] = sorted(cons)
    seen = set(order)
    for s in sorted(a1, key=lambda v: (len(by_label[left[v]]), v)):
        if s in seen:
            continue
        queue = [s]
        seen.add(s)
        while queue:
            x = queue.pop(0)
            order.append(x)
            for y in sorted(a1[x]):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    order = list(dict.fromkeys(order))

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(x: int, y: int) -> bool:
        for w, z in mapping.items():
            if (w in a1[x]) != (z in a2[y]):
                return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        cands = [cons[x]] if x in cons else by_label[left[x]]
        for y in cands:
            if y in used or right[y] != left[x]:
                continue
            if not consistent(x, y):
                continue
            mapping[x] = y
            used.add(y)
            if search(i + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return dict(mapping) if search(0) else None
