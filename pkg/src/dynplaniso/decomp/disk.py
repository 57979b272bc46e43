"""Disk graphs of 3-connected components and unfurl predictions.

Deleting an edge e from a 3-connected component C either keeps it
3-connected or turns its tri-tree into a path whose separating pairs are
read off the two faces beside e. The BC analogue: deleting a cycle edge from
a biconnected graph turns the cycle into a path of blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..embedding import CombFace, embed_3connected
from ..errors import NotAFacePair, Still3Connected, StillBiconnected
from ..graph import Edge, StaticGraph, edge_key, is_biconnected, is_connected, is_triconnected
from .tritree import CYCLE, build_tri_tree


@dataclass(frozen=True)
class DiskGraph:
    nodes: tuple[tuple[int, int], ...]  # in cycle order
    f1: CombFace
    f2: CombFace

    @property
    def arcs(self) -> tuple[tuple[tuple[int, int], tuple[int, int]], ...]:
        n = len(self.nodes)
        if n == 0:
            return ()
        return tuple((self.nodes[i], self.nodes[(i + 1) % n]) for i in range(n))

    def __len__(self) -> int:
        return len(self.nodes)

    def distance(self, x: tuple[int, int], y: tuple[int, int]) -> int:
        i, j = self.nodes.index(x), self.nodes.index(y)
        return (j - i) % len(self.nodes)


def _weak_order(face: tuple[int, ...], seq: tuple[int, int, int, int]) -> bool:
    """a, a', b, b' met in this order walking the face one way (repeats allowed)."""
    a = seq[0]
    n = len(face)
    for cyc in (face, face[::-1]):
        pos = {v: i for i, v in enumerate(cyc)}
        off = [(pos[x] - pos[a]) % n for x in seq]
        if seq[3] == a:
            off[3] = n
        if off[1] > 0 and off[1] <= off[2] <= off[3]:
            return True
    return False


def disk_candidates(faces, f1: CombFace, f2: CombFace) -> set[tuple[int, int]]:
    """Pairs meeting conditions (a) and (b).

    Vertices lying on both faces are not used: such a vertex together with
    any partner never separates the graph left after removing the shared edge.
    """
    s1, s2 = f1.vertex_set - f2.vertex_set, f2.vertex_set - f1.vertex_set
    out = set()
    for f in faces:
        if f.vertex_set in (f1.vertex_set, f2.vertex_set):
            continue
        for a in f.vertex_set & s1:
            for b in f.vertex_set & s2:
                if a != b:
                    out.add((a, b))
    return out


def disk_graph(c: StaticGraph, f1: CombFace, f2: CombFace, start: int | None = None) -> DiskGraph:
    """Nodes of Disk(c, f1, f2) in cycle order.

    ``start`` fixes where the walk along ``f1`` begins (default: its first
    vertex); nodes are sorted along ``f1`` and, for ties, along ``f2``.
    """
    emb = embed_3connected(c, f1)
    sets = {f.vertex_set for f in emb.faces}
    if f2.vertex_set not in sets or f2.vertex_set == f1.vertex_set:
        raise NotAFacePair(f"{f2.cycle} is not a second face of the embedding")
    f2 = next(f for f in emb.faces if f.vertex_set == f2.vertex_set)
    f1 = next(f for f in emb.faces if f.vertex_set == f1.vertex_set)
    others = [f for f in emb.faces if f.vertex_set not in (f1.vertex_set, f2.vertex_set)]
    cands = disk_candidates(emb.faces, f1, f2)
    nodes = []
    for a, b in cands:
        pruned = False
        for a2, b2 in cands:
            if a2 == a or b2 == b:
                continue
            quad = {a, a2, b, b2}
            if any(quad <= f.vertex_set and _weak_order(f.cycle, (a, a2, b, b2)) for f in others):
                pruned = True
                break
        if not pruned:
            nodes.append((a, b))
    return DiskGraph(_cycle_order(nodes, f1, f2, start), f1, f2)


def _cycle_order(nodes, f1: CombFace, f2: CombFace, start: int | None) -> tuple[tuple[int, int], ...]:
    if not nodes:
        return ()
    walk1 = f1.walk_from(f1.cycle[0] if start is None else start)
    p1 = {v: i for i, v in enumerate(walk1)}
    best = None
    for cyc in (f2.cycle, f2.cycle[::-1]):
        b0 = min(nodes, key=lambda n: (p1[n[0]], n[1]))[1] if start is None or start not in cyc else start
        i = cyc.index(b0)
        walk2 = cyc[i:] + cyc[:i]
        p2 = {v: k for k, v in enumerate(walk2)}
        order = sorted(nodes, key=lambda n: (p1[n[0]], p2[n[1]]))
        bs = [p2[n[1]] for n in order]
        descents = sum(1 for x, y in zip(bs, bs[1:]) if y < x)
        if best is None or descents < best[0]:
            best = (descents, tuple(order))
    assert best is not None
    return best[1]


def faces_beside(c: StaticGraph, e: Edge) -> tuple[CombFace, CombFace]:
    """The two faces along edge ``e``; the first has the smaller sorted vertex set."""
    from ..embedding import some_face

    emb = embed_3connected(c, some_face(c))
    u, v = e
    fs = [f for f in emb.faces if (u, v) in f.darts or (v, u) in f.darts]
    fs.sort(key=lambda f: sorted(f.vertex_set))
    return fs[0], fs[1]


def predict_unfurl_tri(c: StaticGraph, e: Edge) -> tuple[list[tuple[int, int]], int]:
    """Separating pairs of c - e in path order from u's side, and the tri-tree path length."""
    u, v = e
    if is_triconnected(c.with_edges(remove=[edge_key(u, v)])):
        raise Still3Connected(f"removing {e} keeps the graph 3-connected")
    f1, f2 = faces_beside(c, edge_key(u, v))
    nodes = disk_graph(c, f1, f2).nodes
    # both faces walked from u heading away from v
    pos = []
    for f in (f1, f2):
        w = f.walk_from(u)
        if w[1] == v:
            w = (u,) + w[1:][::-1]
        pos.append({x: i for i, x in enumerate(w)})
    nodes = sorted(nodes, key=lambda n: (pos[0][n[0]], pos[1][n[1]]))
    return nodes, 2 * len(nodes)


def predict_unfurl_bc(b: StaticGraph, e: Edge) -> tuple[list[int], int]:
    """Cut vertices of b - e in path order from u's side, and the BC-tree path length."""
    u, v = e
    rest = b.with_edges(remove=[edge_key(u, v)])
    if is_biconnected(rest) or not is_connected(rest):
        raise StillBiconnected(f"removing {e} keeps the graph biconnected (or disconnects it)")
    tree = build_tri_tree(b)
    (s,) = [c for c in tree.components_with(u, v) if c.kind == CYCLE]
    order = list(s.cycle_order)
    i = order.index(u)
    order = order[i:] + order[:i]
    if order[1] == v:
        order = [u] + order[1:][::-1]
    return order[1:-1], 2 * len(order) - 4
