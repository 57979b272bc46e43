"""Simple undirected graphs, edge-change events and their classification."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

import networkx as nx

from .errors import IllegalChange, NonPlanarResult

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


# ---------------------------------------------------------------------------
# Static snapshots
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StaticGraph:
    """Immutable graph on an arbitrary set of integer vertices."""

    vertices: tuple[int, ...]
    edges: frozenset[Edge]

    @classmethod
    def build(cls, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> "StaticGraph":
        es = frozenset(edge_key(u, v) for u, v in edges)
        vs = set(vertices)
        for u, v in es:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            vs.add(u)
            vs.add(v)
        return cls(tuple(sorted(vs)), es)

    @cached_property
    def adj(self) -> dict[int, frozenset[int]]:
        nb: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return {v: frozenset(s) for v, s in nb.items()}

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def with_edges(self, add: Iterable[Edge] = (), remove: Iterable[Edge] = ()) -> "StaticGraph":
        es = set(self.edges)
        es.difference_update(edge_key(*e) for e in remove)
        es.update(edge_key(*e) for e in add)
        return StaticGraph.build(self.vertices, es)

    def induced(self, vertices: Iterable[int]) -> "StaticGraph":
        vs = frozenset(vertices)
        return StaticGraph(
            tuple(sorted(vs)),
            frozenset(e for e in self.edges if e[0] in vs and e[1] in vs),
        )

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(sorted(self.edges))
        return g


# ---------------------------------------------------------------------------
# The dynamic graph
# ---------------------------------------------------------------------------


class DynamicGraph:
    """Simple undirected graph over the fixed universe ``range(n)``."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self._adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            self.add_edge(u, v)

    def _check(self, u: int, v: int) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise IllegalChange(f"vertex out of range in ({u}, {v})")
        if u == v:
            raise IllegalChange(f"self-loop at {u}")

    def add_edge(self, u: int, v: int) -> None:
        self._check(u, v)
        if v in self._adj[u]:
            raise IllegalChange(f"edge ({u}, {v}) already present")
        self._adj[u].add(v)
        self._adj[v].add(u)

    def remove_edge(self, u: int, v: int) -> None:
        self._check(u, v)
        if v not in self._adj[u]:
            raise IllegalChange(f"edge ({u}, {v}) not present")
        self._adj[u].discard(v)
        self._adj[v].discard(u)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def neighbors(self, v: int) -> set[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def edges(self) -> Iterator[Edge]:
        for u in range(self.n):
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    def edge_count(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    def copy(self) -> "DynamicGraph":
        g = DynamicGraph(self.n)
        g._adj = [set(a) for a in self._adj]
        return g

    def snapshot(self, vertices: Iterable[int] | None = None) -> StaticGraph:
        if vertices is None:
            return StaticGraph(tuple(range(self.n)), frozenset(self.edges()))
        vs = frozenset(vertices)
        es = frozenset(edge_key(u, v) for u in vs for v in self._adj[u] if v in vs and u < v)
        return StaticGraph(tuple(sorted(vs)), es)

    def component_of(self, v: int) -> set[int]:
        seen = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in self._adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def components(self) -> list[set[int]]:
        seen: set[int] = set()
        out = []
        for v in range(self.n):
            if v not in seen:
                c = self.component_of(v)
                seen |= c
                out.append(c)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DynamicGraph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __repr__(self) -> str:
        return f"DynamicGraph(n={self.n}, edges={sorted(self.edges())})"


# ---------------------------------------------------------------------------
# Change events
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChangeEvent:
    kind: str  # "insert" | "delete"
    u: int
    v: int

    def __post_init__(self) -> None:
        if self.kind not in ("insert", "delete"):
            raise ValueError(f"unknown change kind {self.kind!r}")
        if self.u > self.v:
            a, b = self.v, self.u
            object.__setattr__(self, "u", a)
            object.__setattr__(self, "v", b)

    @classmethod
    def insert(cls, u: int, v: int) -> "ChangeEvent":
        return cls("insert", u, v)

    @classmethod
    def delete(cls, u: int, v: int) -> "ChangeEvent":
        return cls("delete", u, v)

    @property
    def edge(self) -> Edge:
        return (self.u, self.v)

    @property
    def is_insert(self) -> bool:
        return self.kind == "insert"


@dataclass(frozen=True)
class ChangeType:
    direction: str  # "+" | "-"
    k_before: int
    k_after: int

    def __post_init__(self) -> None:
        if self.direction == "+" and self.k_after < self.k_before:
            raise ValueError("an insertion cannot lower connectivity")
        if self.direction == "-" and self.k_after > self.k_before:
            raise ValueError("a deletion cannot raise connectivity")

    @property
    def code(self) -> str:
        return f"{self.direction}{self.k_before},{self.k_after}"

    def __str__(self) -> str:
        return f"eps{self.code}"


def apply_change(g: DynamicGraph, e: ChangeEvent) -> DynamicGraph:
    """Return a copy of ``g`` with ``e`` applied."""
    h = g.copy()
    if e.is_insert:
        h.add_edge(e.u, e.v)
    else:
        h.remove_edge(e.u, e.v)
    return h


def is_planar(g: DynamicGraph | StaticGraph) -> bool:
    if isinstance(g, DynamicGraph):
        n, m = g.n, g.edge_count()
        nxg = nx.Graph()
        nxg.add_nodes_from(range(g.n))
        nxg.add_edges_from(g.edges())
    else:
        n, m = g.n, g.m
        nxg = g.to_networkx()
    if n >= 3 and m > 3 * n - 6:
        return False
    planar, _ = nx.check_planarity(nxg)
    return planar


def classify_change(g: DynamicGraph, e: ChangeEvent) -> ChangeType:
    """Classify ``e`` by the co-connectivity of its endpoints before and after."""
    from .decomp.levels import co_connectivity

    after = apply_change(g, e)
    if e.is_insert and not is_planar(after):
        raise NonPlanarResult(f"inserting {e.edge} breaks planarity")
    k0 = co_connectivity(g, e.u, e.v)
    k1 = co_connectivity(after, e.u, e.v)
    return ChangeType("+" if e.is_insert else "-", k0, k1)


# ---------------------------------------------------------------------------
# Small structural predicates
# ---------------------------------------------------------------------------


def articulation_points(adj: dict[int, Iterable[int]] | StaticGraph, removed: frozenset[int] = frozenset()) -> set[int]:
    """Cut vertices of the graph induced on the non-removed vertices."""
    if isinstance(adj, StaticGraph):
        adj = adj.adj
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    cuts: set[int] = set()
    timer = 0
    for root in adj:
        if root in removed or root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        children = 0
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w in removed:
                    continue
                if w not in disc:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, v, iter(adj[w])))
                    advanced = True
                    break
                if w != parent:
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if p == root:
                    children += 1
                elif low[v] >= disc[p]:
                    cuts.add(p)
        if children > 1:
            cuts.add(root)
    return cuts


def is_connected(g: StaticGraph, removed: frozenset[int] = frozenset()) -> bool:
    vs = [v for v in g.vertices if v not in removed]
    if not vs:
        return True
    seen = {vs[0]}
    stack = [vs[0]]
    while stack:
        x = stack.pop()
        for y in g.adj[x]:
            if y not in seen and y not in removed:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(vs)


def is_biconnected(g: StaticGraph) -> bool:
    if g.n < 2 or not is_connected(g):
        return False
    if g.n == 2:
        return g.m == 1
    return not articulation_points(g)


def is_triconnected(g: StaticGraph) -> bool:
    """3-vertex-connectivity in the strict sense: at least four vertices."""
    if g.n < 4 or not is_biconnected(g):
        return False
    return all(not articulation_points(g, frozenset([v])) and is_connected(g, frozenset([v])) for v in g.vertices)
