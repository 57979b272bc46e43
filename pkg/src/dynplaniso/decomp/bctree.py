"""Block-cut trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..graph import DynamicGraph, Edge, StaticGraph, edge_key


@dataclass(frozen=True)
class Block:
    vertices: frozenset[int]
    edges: frozenset[Edge]

    @property
    def trivial(self) -> bool:
        return len(self.edges) == 1

    @property
    def key(self) -> frozenset[int]:
        return self.vertices

    def graph(self) -> StaticGraph:
        return StaticGraph(tuple(sorted(self.vertices)), self.edges)


def biconnected_blocks(adj: dict[int, Iterable[int]], vertices: Iterable[int] | None = None) -> list[Block]:
    """Edge-stack Tarjan decomposition into blocks (iterative)."""
    verts = list(adj) if vertices is None else list(vertices)
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[Block] = []
    timer = 0
    for root in verts:
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        estack: list[Edge] = []
        stack = [(root, -1, iter(sorted(adj[root])))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w not in disc:
                    disc[w] = low[w] = timer
                    timer += 1
                    estack.append(edge_key(v, w))
                    stack.append((w, v, iter(sorted(adj[w]))))
                    advanced = True
                    break
                if w != parent and disc[w] < disc[v]:
                    low[v] = min(low[v], disc[w])
                    estack.append(edge_key(v, w))
            if advanced:
                continue
            stack.pop()
            if not stack:
                continue
            p = stack[-1][0]
            low[p] = min(low[p], low[v])
            if low[v] >= disc[p]:
                target = edge_key(p, v)
                es = set()
                while True:
                    e = estack.pop()
                    es.add(e)
                    if e == target:
                        break
                vs = frozenset(x for e in es for x in e)
                blocks.append(Block(vs, frozenset(es)))
    return blocks


@dataclass
class BCTree:
    """Blocks and cut vertices of one connected component.

    A block node and a cut node are adjacent iff the cut vertex lies in the
    block. A component without edges has no blocks and is stored through
    ``isolated``.
    """

    blocks: list[Block]
    isolated: int | None = None
    cut_vertices: frozenset[int] = field(init=False)

    def __post_init__(self) -> None:
        count: dict[int, int] = {}
        for b in self.blocks:
            for v in b.vertices:
                count[v] = count.get(v, 0) + 1
        self.cut_vertices = frozenset(v for v, c in count.items() if c > 1)

    @property
    def vertices(self) -> frozenset[int]:
        if not self.blocks:
            return frozenset() if self.isolated is None else frozenset([self.isolated])
        return frozenset().union(*(b.vertices for b in self.blocks))

    def nodes(self) -> list[tuple[str, object]]:
        out: list[tuple[str, object]] = [("B", b.vertices) for b in self.blocks]
        out += [("c", v) for v in sorted(self.cut_vertices)]
        return out

    def neighbours(self, node: tuple[str, object]) -> list[tuple[str, object]]:
        kind, val = node
        if kind == "B":
            return [("c", v) for v in sorted(val) if v in self.cut_vertices]  # type: ignore[arg-type]
        return [("B", b.vertices) for b in self.blocks if val in b.vertices]

    def blocks_of(self, v: int) -> list[Block]:
        return [b for b in self.blocks if v in b.vertices]

    def node_of(self, v: int) -> tuple[str, object]:
        """Cut node of ``v`` if it is a cut vertex, else its unique block node."""
        if v in self.cut_vertices:
            return ("c", v)
        bs = self.blocks_of(v)
        return ("B", bs[0].vertices) if bs else ("v", v)

    def labels(self) -> tuple[frozenset, frozenset]:
        return (
            frozenset((b.vertices, b.edges) for b in self.blocks),
            self.cut_vertices,
        )


def build_bc_tree(component: DynamicGraph | StaticGraph) -> BCTree:
    g = component.snapshot() if isinstance(component, DynamicGraph) else component
    if g.m == 0:
        return BCTree([], isolated=g.vertices[0] if g.vertices else None)
    blocks = biconnected_blocks(g.adj, g.vertices)
    blocks.sort(key=lambda b: sorted(b.vertices))
    return BCTree(blocks)
