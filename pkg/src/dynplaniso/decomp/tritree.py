"""Triconnected-component trees of biconnected graphs.

Component nodes are chordless cycles or 3-connected graphs; pair nodes are
the 3-connected separating pairs. A component is adjacent to a pair node iff
it contains both vertices of the pair. A component's edge set is the induced
real edge set plus one virtual edge for each adjacent pair that is not joined
by a real edge.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import count
from typing import Iterable

from ..errors import DifferentTrees
from ..graph import DynamicGraph, Edge, StaticGraph, articulation_points, edge_key

Node = tuple[str, frozenset[int]]  # ("C", vertex set) or ("P", pair)

CYCLE = "cycle"
RIGID = "rigid"


@dataclass(frozen=True)
class TriComponent:
    kind: str
    vertices: frozenset[int]
    real: frozenset[Edge]
    virtual: frozenset[Edge]

    @property
    def key(self) -> frozenset[int]:
        return self.vertices

    @property
    def node(self) -> Node:
        return ("C", self.vertices)

    @cached_property
    def edges(self) -> frozenset[Edge]:
        return self.real | self.virtual

    @cached_property
    def graph(self) -> StaticGraph:
        return StaticGraph(tuple(sorted(self.vertices)), self.edges)

    @cached_property
    def cycle_order(self) -> tuple[int, ...]:
        """Vertices in cyclic order, starting at the minimum, towards its smaller neighbour."""
        if self.kind != CYCLE:
            raise ValueError("not a cycle component")
        adj = self.graph.adj
        start = min(self.vertices)
        order = [start]
        prev, cur = start, min(adj[start])
        while cur != start:
            order.append(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        return tuple(order)


@dataclass
class TriTree:
    components: dict[frozenset[int], TriComponent]
    pairs: set[frozenset[int]] = field(default_factory=set)

    # -- navigation ------------------------------------------------------

    def nodes(self) -> list[Node]:
        out: list[Node] = [("C", k) for k in sorted(self.components, key=sorted)]
        out += [("P", p) for p in sorted(self.pairs, key=sorted)]
        return out

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.components)

    def neighbours(self, node: Node) -> list[Node]:
        kind, key = node
        if kind == "P":
            return [("C", k) for k in sorted(self.components, key=sorted) if key <= k]
        return [("P", p) for p in sorted(self.pairs, key=sorted) if p <= key]

    def components_with(self, *vs: int) -> list[TriComponent]:
        s = set(vs)
        return [c for k, c in sorted(self.components.items(), key=lambda kv: sorted(kv[0])) if s <= k]

    def component(self, node: Node) -> TriComponent:
        return self.components[node[1]]

    def path(self, x: Node, y: Node) -> list[Node]:
        """Node sequence from ``x`` to ``y``."""
        if not self.has_node(x) or not self.has_node(y):
            raise DifferentTrees(f"{x} or {y} is not a node of this tree")
        prev: dict[Node, Node | None] = {x: None}
        queue = deque([x])
        while queue:
            a = queue.popleft()
            if a == y:
                break
            for b in self.neighbours(a):
                if b not in prev:
                    prev[b] = a
                    queue.append(b)
        if y not in prev:
            raise DifferentTrees(f"{x} and {y} are in different trees")
        out = [y]
        while out[-1] != x:
            out.append(prev[out[-1]])  # type: ignore[arg-type]
        return out[::-1]

    def has_node(self, node: Node) -> bool:
        kind, key = node
        return key in self.components if kind == "C" else key in self.pairs

    def labels(self) -> tuple[frozenset, frozenset]:
        comps = frozenset((c.kind, c.vertices, c.real, c.virtual) for c in self.components.values())
        return comps, frozenset(self.pairs)

    def real_edges(self) -> frozenset[Edge]:
        return frozenset().union(*(c.real for c in self.components.values()))


# ---------------------------------------------------------------------------
# From-scratch construction: recursive splitting, then merging
# ---------------------------------------------------------------------------


@dataclass
class _Piece:
    edges: dict[int, Edge]  # edge id -> endpoints; negative ids are virtual
    bond: bool = False

    def vertices(self) -> set[int]:
        return {x for e in self.edges.values() for x in e}


def _adjacency(piece: _Piece) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {}
    for u, v in piece.edges.values():
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def _components_without(adj: dict[int, set[int]], removed: set[int]) -> list[set[int]]:
    seen: set[int] = set()
    out = []
    for s in sorted(adj):
        if s in removed or s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in removed and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        out.append(comp)
    return out


def _find_split(piece: _Piece) -> tuple[int, int, list[set[int]]] | None:
    adj = _adjacency(piece)
    if len(adj) < 4:
        return None
    for a in sorted(adj):
        for b in sorted(articulation_points(adj, frozenset([a]))):
            if b < a:
                continue
            comps = _components_without(adj, {a, b})
            if len(comps) >= 2:
                return a, b, comps
    return None


def _split_all(g: StaticGraph) -> list[_Piece]:
    fresh = count(-1, -1)
    start = _Piece({i: e for i, e in enumerate(sorted(g.edges))})
    todo = [start]
    done: list[_Piece] = []
    while todo:
        piece = todo.pop()
        found = _find_split(piece)
        if found is None:
            done.append(piece)
            continue
        a, b, comps = found
        ab = {i: e for i, e in piece.edges.items() if set(e) == {a, b}}
        children = []
        for comp in comps:
            es = {i: e for i, e in piece.edges.items() if e[0] in comp or e[1] in comp}
            children.append(es)
        pair = edge_key(a, b)
        if len(children) == 2 and not ab:
            vid = next(fresh)
            for es in children:
                es[vid] = pair
                todo.append(_Piece(es))
            continue
        bond = dict(ab)
        for es in children:
            vid = next(fresh)
            es[vid] = pair
            bond[vid] = pair
            todo.append(_Piece(es))
        done.append(_Piece(bond, bond=True))
    return done


def _is_polygon(piece: _Piece) -> bool:
    adj = _adjacency(piece)
    return not piece.bond and all(len(s) == 2 for s in adj.values()) and len(adj) == len(piece.edges)


def _merge_polygons(pieces: list[_Piece]) -> list[_Piece]:
    while True:
        owner: dict[int, list[int]] = {}
        for idx, p in enumerate(pieces):
            for i in p.edges:
                if i < 0:
                    owner.setdefault(i, []).append(idx)
        hit = None
        for vid, idxs in sorted(owner.items()):
            if len(idxs) == 2 and all(_is_polygon(pieces[j]) for j in idxs):
                hit = vid, idxs
                break
        if hit is None:
            return pieces
        vid, (i, j) = hit
        merged = {k: e for k, e in pieces[i].edges.items() if k != vid}
        merged.update((k, e) for k, e in pieces[j].edges.items() if k != vid)
        pieces = [p for k, p in enumerate(pieces) if k not in (i, j)] + [_Piece(merged)]


def assemble(
    real_edges: Iterable[Edge],
    comps: Iterable[tuple[str, frozenset[int]]],
    pairs: Iterable[frozenset[int]],
) -> TriTree:
    """Build a ``TriTree`` from component kinds/vertex sets and the pair set."""
    real = frozenset(edge_key(*e) for e in real_edges)
    pair_set = set(pairs)
    out: dict[frozenset[int], TriComponent] = {}
    for kind, vs in comps:
        r = frozenset(e for e in real if e[0] in vs and e[1] in vs)
        virt = frozenset(edge_key(*sorted(p)) for p in pair_set if p <= vs) - r
        out[vs] = TriComponent(kind, vs, r, virt)
    return TriTree(out, pair_set)


def build_tri_tree(bicomp: DynamicGraph | StaticGraph) -> TriTree:
    g = bicomp.snapshot() if isinstance(bicomp, DynamicGraph) else bicomp
    if isinstance(bicomp, DynamicGraph):
        g = g.induced(v for v in g.vertices if g.adj[v])
    if g.m < 3:
        raise ValueError("tri-trees are defined for non-trivial biconnected graphs only")
    pieces = _merge_polygons(_split_all(g))
    comps: list[tuple[str, frozenset[int]]] = []
    pairs: set[frozenset[int]] = set()
    owner: dict[int, list[_Piece]] = {}
    for p in pieces:
        if p.bond:
            pairs.add(frozenset(next(iter(p.edges.values()))))
            continue
        comps.append((CYCLE if _is_polygon(p) else RIGID, frozenset(p.vertices())))
        for i in p.edges:
            if i < 0:
                owner.setdefault(i, []).append(p)
    for vid, ps in owner.items():
        if len(ps) == 2 and not any(q.bond for q in ps):
            pairs.add(frozenset(ps[0].edges[vid]))
    return assemble(g.edges, comps, pairs)
