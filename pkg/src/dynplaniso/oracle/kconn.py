"""Co-membership of two vertices in a common k-connected component."""

from __future__ import annotations

from ._common import adjacency, reach
from .spqr import oracle_spqr


def _same_block(adj: dict[int, set[int]], u: int, v: int) -> bool:
    if v in adj[u]:
        return True
    if v not in reach(adj, u):
        return False
    return all(v in reach(adj, u, [w]) for w in adj if w not in (u, v))


def _block_of(adj: dict[int, set[int]], u: int, v: int) -> tuple[list[int], list[tuple[int, int]]]:
    verts = [w for w in adj if w in (u, v) or (_same_block(adj, u, w) and _same_block(adj, v, w))]
    keep = set(verts)
    # an edge belongs to the block iff both ends do and the ends are co-biconnected
    es = [(a, b) for a in keep for b in adj[a] if a < b and b in keep]
    return verts, es


def oracle_kconn(g, u: int, v: int, k: int) -> bool:
    if k > 3 or k < 0:
        raise ValueError("k must be in 0..3")
    if k == 0:
        return True
    adj = adjacency(g)
    if u == v:
        return True
    if k == 1:
        return v in reach(adj, u)
    if not _same_block(adj, u, v):
        return False
    if k == 2:
        return True
    verts, es = _block_of(adj, u, v)
    if len(es) < 3:
        return False
    tree = oracle_spqr((verts, es))
    return any(c.kind == "rigid" and u in c.vertices and v in c.vertices for c in tree.components.values())


def oracle_block(g, u: int, v: int) -> tuple[list[int], list[tuple[int, int]]] | None:
    """Vertices and edges of the block containing both ``u`` and ``v`` (None if there is none)."""
    adj = adjacency(g)
    if u == v or not _same_block(adj, u, v):
        return None
    return _block_of(adj, u, v)
