"""Distances in decomposition trees and on cycle components; coherent paths."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..embedding import trace_faces
from ..errors import AmbiguousOrientation, DifferentTrees, NotCoherent, NotOnCycle
from ..graph import Edge, StaticGraph, edge_key, is_planar, is_triconnected
from .bctree import BCTree
from .tritree import CYCLE, TriComponent, TriTree


def tree_distance(tree: TriTree | BCTree, x, y) -> int:
    """Number of tree edges between nodes ``x`` and ``y``."""
    if x == y:
        return 0
    known = set(tree.nodes())
    if x not in known or y not in known:
        raise DifferentTrees(f"{x} or {y} is not a node of this tree")
    dist = {x: 0}
    queue = deque([x])
    while queue:
        a = queue.popleft()
        for b in tree.neighbours(a):
            if b not in dist:
                dist[b] = dist[a] + 1
                if b == y:
                    return dist[b]
                queue.append(b)
    raise DifferentTrees(f"{x} and {y} are in different trees")


def cycle_distance(s: TriComponent | tuple[int, ...], orientation: tuple[int, int, int], u: int, v: int) -> int:
    """Steps from ``u`` to ``v`` walking the cycle in the direction s1 -> s2 -> s3."""
    order = list(s.cycle_order if isinstance(s, TriComponent) else s)
    if isinstance(s, TriComponent) and s.kind != CYCLE:
        raise NotOnCycle("component is not a cycle")
    s1, s2, s3 = orientation
    if len({s1, s2, s3}) < 3:
        raise AmbiguousOrientation(f"orientation {orientation} needs three distinct vertices")
    pos = {x: i for i, x in enumerate(order)}
    for x in (s1, s2, s3, u, v):
        if x not in pos:
            raise NotOnCycle(f"vertex {x} is not on the cycle")
    n = len(order)
    # forward iff s2 comes before s3 when walking forward from s1
    fwd = (pos[s2] - pos[s1]) % n < (pos[s3] - pos[s1]) % n
    d = (pos[v] - pos[u]) % n
    return d if fwd else (-d) % n


# ---------------------------------------------------------------------------
# Coherent paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoherentPath:
    c1: frozenset[int]
    c2: frozenset[int]
    anchors: tuple[int, int]
    nodes: tuple[tuple[str, frozenset[int]], ...]
    tree: TriTree

    @property
    def components(self) -> list[TriComponent]:
        return [self.tree.components[k] for kind, k in self.nodes if kind == "C"]

    @property
    def pairs(self) -> list[frozenset[int]]:
        return [k for kind, k in self.nodes if kind == "P"]

    def merged_graph(self) -> StaticGraph:
        """Union of the path's components plus the anchor edge.

        Virtual edges of pairs interior to the path disappear unless real.
        """
        comps = self.components
        inner = {edge_key(*sorted(p)) for p in self.pairs}
        real = frozenset().union(*(c.real for c in comps))
        edges: set[Edge] = set()
        for c in comps:
            edges |= c.real
            edges |= {e for e in c.virtual if e not in inner or e in real}
        edges.add(edge_key(*self.anchors))
        verts = frozenset().union(*(c.vertices for c in comps))
        return StaticGraph(tuple(sorted(verts)), frozenset(edges))


def coherent_path(state, c1: frozenset[int], c2: frozenset[int], a1: int, a2: int) -> CoherentPath | None:
    """Tri-tree path from ``c1`` to ``c2``; None unless inserting (a1, a2) keeps planarity."""
    block = state.shared_block(a1, a2)
    if block is None or block.tri is None:
        return None
    tree = block.tri
    if c1 not in tree.components or c2 not in tree.components or a1 not in c1 or a2 not in c2:
        return None
    if state.graph.has_edge(a1, a2) or a1 == a2:
        return None
    nodes = tree.path(("C", c1), ("C", c2))
    g = state.graph.snapshot().with_edges(add=[edge_key(a1, a2)])
    if not is_planar(g):
        return None
    return CoherentPath(c1, c2, (a1, a2), tuple(nodes), tree)


def common_face_after_insert(state, path: CoherentPath, s) -> bool:
    """Whether all of ``s`` lie on one face of the merged component of ``path``."""
    s = set(s)
    if len(s) <= 1:
        return True
    h = path.merged_graph()
    if not is_triconnected(h):
        raise NotCoherent("the path does not merge into a 3-connected component")
    if not s <= set(h.vertices):
        raise NotCoherent("vertices outside the merged component")
    return any(s <= f.vertex_set for f in trace_faces(h))
