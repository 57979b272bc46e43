"""Co-connectivity levels computed from scratch."""

from __future__ import annotations

from ..graph import DynamicGraph, StaticGraph
from .bctree import biconnected_blocks
from .tritree import RIGID, build_tri_tree


def co_connectivity(g: DynamicGraph | StaticGraph, u: int, v: int) -> int:
    """Largest k <= 3 with u and v in a common k-connected component."""
    s = g.snapshot() if isinstance(g, DynamicGraph) else g
    comp = _reach(s, u)
    if v not in comp:
        return 0
    if u == v:
        return 3
    blocks = biconnected_blocks(s.adj, sorted(comp))
    shared = [b for b in blocks if u in b.vertices and v in b.vertices]
    if not shared:
        return 1
    b = shared[0]
    if b.trivial:
        return 2
    tree = build_tri_tree(b.graph())
    return 3 if any(c.kind == RIGID for c in tree.components_with(u, v)) else 2


def _reach(g: StaticGraph, s: int) -> set[int]:
    seen = {s}
    stack = [s]
    while stack:
        x = stack.pop()
        for y in g.adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen
