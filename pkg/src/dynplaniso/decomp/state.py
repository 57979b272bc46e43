"""Incrementally maintained block-cut forest with one tri-tree per block.

Every edge change is dispatched on its change type. Block-level effects
(new bridge, merging a path of blocks into one block closed by a new cycle
component, unfurling a block into a path of blocks) are carried out on the
block table directly. Effects inside a block are carried out by re-deriving
only the affected region of the tri-tree: the components on the tree path
between the endpoints (insertions) or the components holding the edge
(deletions). The region's skeleton keeps one virtual edge per separating
pair it shares with the rest of the tree, and those pairs are re-validated
afterwards; a pair left with fewer than three disjoint paths dissolves and
its two cycle neighbours fuse.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from ..errors import IllegalChange, TypeMismatch
from ..graph import ChangeEvent, ChangeType, DynamicGraph, Edge, StaticGraph, edge_key, is_triconnected
from .bctree import BCTree, Block, biconnected_blocks
from .tritree import CYCLE, RIGID, TriComponent, TriTree, assemble, build_tri_tree


@dataclass(frozen=True)
class BlockState:
    vertices: frozenset[int]
    edges: frozenset[Edge]
    tri: TriTree | None = None

    @property
    def trivial(self) -> bool:
        return len(self.edges) == 1

    @property
    def key(self) -> frozenset[int]:
        return self.vertices


def _paths(kind: str) -> int:
    # disjoint x-y paths a component adds for one of its pairs {x, y}
    return 1 if kind == CYCLE else 2


# ---------------------------------------------------------------------------
# Region re-derivation inside one tri-tree
# ---------------------------------------------------------------------------


def _neighbour_keys(tree: TriTree, pair: frozenset[int]) -> list[frozenset[int]]:
    return [k for k in tree.components if pair <= k]


def rebuild_region(
    tree: TriTree,
    real_after: frozenset[Edge],
    region: Iterable[frozenset[int]],
    extra_pairs: dict[frozenset[int], int] | None = None,
) -> TriTree:
    """Replace the components in ``region`` by the decomposition of their skeleton.

    ``real_after`` holds the block's real edges after the change.
    ``extra_pairs`` maps pairs that are not yet tree nodes to the number of
    disjoint paths the outside contributes (used when a virtual edge is
    inserted on behalf of a new cycle component).
    """
    region = set(region)
    region_vs: set[int] = set().union(*region)
    external: dict[frozenset[int], int] = {}
    kept_pairs: set[frozenset[int]] = set()
    for p in tree.pairs:
        nbrs = _neighbour_keys(tree, p)
        inside = [k for k in nbrs if k in region]
        if not inside:
            kept_pairs.add(p)
            continue
        outside = [k for k in nbrs if k not in region]
        if outside:
            external[p] = sum(_paths(tree.components[k].kind) for k in outside)
    for p, c in (extra_pairs or {}).items():
        external[p] = external.get(p, 0) + c

    sk_edges = {e for e in real_after if e[0] in region_vs and e[1] in region_vs}
    sk_edges |= {edge_key(*sorted(p)) for p in external}
    local = build_tri_tree(StaticGraph(tuple(sorted(region_vs)), frozenset(sk_edges)))

    kinds: dict[frozenset[int], str] = {k: c.kind for k, c in tree.components.items() if k not in region}
    kinds.update((k, c.kind) for k, c in local.components.items())
    pairs = kept_pairs | set(local.pairs)

    fuse: list[tuple[frozenset[int], frozenset[int]]] = []
    for p, out in external.items():
        real = 1 if edge_key(*sorted(p)) in real_after else 0
        inner = _neighbour_keys(local, p)
        inside = sum(_paths(local.components[k].kind) for k in inner)
        if out + inside + real >= 3:
            pairs.add(p)
            continue
        # dissolving pair: exactly one cycle on each side
        pairs.discard(p)
        outer = [k for k in kinds if p <= k and k not in local.components]
        fuse.append((outer[0], inner[0]))

    if fuse:
        parent: dict[frozenset[int], frozenset[int]] = {}

        def find(k):
            while parent.get(k, k) != k:
                k = parent[k]
            return k

        for a, b in fuse:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        groups: dict[frozenset[int], set[frozenset[int]]] = {}
        for k in list(kinds):
            groups.setdefault(find(k), set()).add(k)
        merged: dict[frozenset[int], str] = {}
        for members in groups.values():
            if len(members) == 1:
                (k,) = members
                merged[k] = kinds[k]
            else:
                merged[frozenset().union(*members)] = CYCLE
        kinds = merged

    return assemble(real_after, ((kd, k) for k, kd in kinds.items()), pairs)


def tree_region(tree: TriTree, x: int, y: int) -> list[frozenset[int]]:
    """Components on the shortest tree path from a component with x to one with y."""
    cx = [c.key for c in tree.components_with(x)]
    cy = set(c.key for c in tree.components_with(y))
    common = [k for k in cx if k in cy]
    if common:
        return [common[0]]
    # multi-source BFS from all components holding x
    prev: dict[tuple, tuple | None] = {("C", k): None for k in cx}
    queue = deque(prev)
    hit = None
    while queue:
        node = queue.popleft()
        if node[0] == "C" and node[1] in cy:
            hit = node
            break
        for nb in tree.neighbours(node):  # type: ignore[arg-type]
            if nb not in prev:
                prev[nb] = node
                queue.append(nb)
    assert hit is not None, "endpoints are not in one tri-tree"
    out = []
    node = hit
    while node is not None:
        if node[0] == "C":
            out.append(node[1])
        node = prev[node]
    return out[::-1]


# ---------------------------------------------------------------------------
# The maintained state
# ---------------------------------------------------------------------------


@dataclass
class DecompositionState:
    graph: DynamicGraph
    blocks: dict[frozenset[int], BlockState] = field(default_factory=dict)
    vblocks: dict[int, set[frozenset[int]]] = field(default_factory=dict)

    @classmethod
    def from_graph(cls, g: DynamicGraph) -> "DecompositionState":
        st = cls(g.copy())
        snap = g.snapshot()
        adj = {v: snap.adj[v] for v in snap.vertices if snap.adj[v]}
        for b in biconnected_blocks(adj):
            tri = None if b.trivial else build_tri_tree(b.graph())
            st._add(BlockState(b.vertices, b.edges, tri))
        return st

    def copy(self) -> "DecompositionState":
        return DecompositionState(
            self.graph.copy(), dict(self.blocks), {v: set(s) for v, s in self.vblocks.items()}
        )

    # -- block table -----------------------------------------------------

    def _add(self, b: BlockState) -> None:
        self.blocks[b.key] = b
        for v in b.vertices:
            self.vblocks.setdefault(v, set()).add(b.key)

    def _remove(self, key: frozenset[int]) -> BlockState:
        b = self.blocks.pop(key)
        for v in b.vertices:
            s = self.vblocks[v]
            s.discard(key)
            if not s:
                del self.vblocks[v]
        return b

    def blocks_of(self, v: int) -> list[BlockState]:
        return [self.blocks[k] for k in sorted(self.vblocks.get(v, ()), key=sorted)]

    def shared_block(self, u: int, v: int) -> BlockState | None:
        common = self.vblocks.get(u, set()) & self.vblocks.get(v, set())
        return self.blocks[next(iter(common))] if common else None

    def is_cut_vertex(self, v: int) -> bool:
        return len(self.vblocks.get(v, ())) > 1

    # -- queries ---------------------------------------------------------

    def component_vertices(self, v: int) -> frozenset[int]:
        return frozenset(self.graph.component_of(v))

    def co_connectivity(self, u: int, v: int) -> int:
        if u == v:
            return 3
        b = self.shared_block(u, v)
        if b is None:
            return 1 if v in self.graph.component_of(u) else 0
        if b.trivial:
            return 2
        assert b.tri is not None
        return 3 if any(c.kind == RIGID for c in b.tri.components_with(u, v)) else 2

    def bc_tree(self, v: int) -> BCTree:
        comp = self.component_vertices(v)
        keys = {k for x in comp for k in self.vblocks.get(x, ())}
        blocks = [Block(self.blocks[k].vertices, self.blocks[k].edges) for k in sorted(keys, key=sorted)]
        return BCTree(blocks, isolated=None if blocks else v)

    def bc_path(self, u: int, v: int) -> tuple[list[BlockState], list[int]]:
        """Blocks and cut vertices on the block-cut path from u to v."""
        start = ("c", u) if self.is_cut_vertex(u) else ("B", next(iter(self.vblocks[u])))
        goal_blocks = self.vblocks[v]
        prev: dict[tuple, tuple | None] = {start: None}
        queue = deque([start])
        hit = None
        while queue:
            node = queue.popleft()
            if node[0] == "B" and node[1] in goal_blocks:
                hit = node
                break
            if node[0] == "B":
                nbrs = [("c", x) for x in sorted(node[1]) if self.is_cut_vertex(x)]
            else:
                nbrs = [("B", k) for k in sorted(self.vblocks[node[1]], key=sorted)]
            for nb in nbrs:
                if nb not in prev:
                    prev[nb] = node
                    queue.append(nb)
        if hit is None:
            raise TypeMismatch(f"{u} and {v} are not connected")
        seq = []
        node = hit
        while node is not None:
            seq.append(node)
            node = prev[node]
        seq.reverse()
        blocks = [self.blocks[k] for kind, k in seq if kind == "B"]
        cuts = [x for kind, x in seq if kind == "c" and x != u]
        return blocks, cuts

    def predict_after(self, e: ChangeEvent) -> int:
        """Co-connectivity of the endpoints after ``e`` (computed from this state)."""
        u, v = e.u, e.v
        k0 = self.co_connectivity(u, v)
        if e.is_insert:
            if k0 <= 1:
                return 2
            if k0 == 3:
                return 3
            b = self.shared_block(u, v)
            assert b is not None
            if b.trivial:
                return 2
            assert b.tri is not None
            if b.tri.components_with(u, v):
                return 2  # common cycle (chord) or an existing pair of cycles
            return 3
        b = self.shared_block(u, v)
        if b is None:
            raise IllegalChange(f"edge {e.edge} not present")
        if b.trivial:
            return 0
        assert b.tri is not None
        pair = frozenset((u, v))
        if pair in b.tri.pairs:
            return k0
        (c,) = b.tri.components_with(u, v)
        if c.kind == CYCLE:
            return 1
        return 3 if is_triconnected(c.graph.with_edges(remove=[e.edge])) else 2

    def classify(self, e: ChangeEvent) -> ChangeType:
        return ChangeType("+" if e.is_insert else "-", self.co_connectivity(e.u, e.v), self.predict_after(e))

    def canonical(self) -> frozenset:
        return frozenset(
            (b.vertices, b.edges, None if b.tri is None else b.tri.labels()) for b in self.blocks.values()
        )

    # -- updates ---------------------------------------------------------

    def apply(self, e: ChangeEvent, t: ChangeType | None = None) -> ChangeType:
        """Apply ``e`` in place; returns the change type actually observed."""
        expected = self.classify(e) if t is None else t
        if expected.direction != ("+" if e.is_insert else "-"):
            raise TypeMismatch(f"{expected} does not match a {e.kind}")
        k0 = self.co_connectivity(e.u, e.v)
        if k0 != expected.k_before:
            raise TypeMismatch(f"{expected} but endpoints are co-{k0}-connected before the change")
        if e.is_insert:
            self.graph.add_edge(e.u, e.v)
            self._insert(e.u, e.v, k0)
        else:
            self.graph.remove_edge(e.u, e.v)
            self._delete(e.u, e.v)
        k1 = self.co_connectivity(e.u, e.v)
        if k1 != expected.k_after:
            raise TypeMismatch(f"{expected} but endpoints are co-{k1}-connected after the change")
        return expected

    def _insert(self, u: int, v: int, k0: int) -> None:
        e = edge_key(u, v)
        if k0 == 0:
            self._add(BlockState(frozenset(e), frozenset([e])))
            return
        if k0 == 1:
            self._merge_blocks(u, v)
            return
        b = self.shared_block(u, v)
        assert b is not None and b.tri is not None
        real = b.edges | {e}
        pair = frozenset(e)
        if pair in b.tri.pairs:
            tri = assemble(real, ((c.kind, c.vertices) for c in b.tri.components.values()), b.tri.pairs)
        else:
            tri = rebuild_region(b.tri, real, tree_region(b.tri, u, v))
        self._remove(b.key)
        self._add(BlockState(b.vertices, real, tri))

    def _merge_blocks(self, u: int, v: int) -> None:
        blocks, cuts = self.bc_path(u, v)
        stops = [u] + cuts + [v]
        e = edge_key(u, v)
        real = frozenset([e]).union(*(b.edges for b in blocks))
        kinds: dict[frozenset[int], str] = {frozenset(stops): CYCLE}
        pairs: set[frozenset[int]] = set()
        pending: list[tuple[BlockState, int, int]] = []
        for b, x, y in zip(blocks, stops, stops[1:]):
            if b.trivial:
                continue
            assert b.tri is not None
            kinds.update((k, c.kind) for k, c in b.tri.components.items())
            pairs |= b.tri.pairs
            p = frozenset((x, y))
            if p in b.tri.pairs or edge_key(x, y) in b.edges:
                pairs.add(p)
            else:
                pending.append((b, x, y))
        tri = assemble(real, ((kd, k) for k, kd in kinds.items()), pairs)
        for b, x, y in pending:
            assert b.tri is not None
            region = tree_region(b.tri, x, y)
            tri = rebuild_region(tri, real, region, {frozenset((x, y)): 1})
        for b in blocks:
            self._remove(b.key)
        self._add(BlockState(frozenset().union(*(b.vertices for b in blocks)), real, tri))

    def _delete(self, u: int, v: int) -> None:
        e = edge_key(u, v)
        b = self.shared_block(u, v)
        assert b is not None
        if b.trivial:
            self._remove(b.key)
            return
        assert b.tri is not None
        real = b.edges - {e}
        pair = frozenset(e)
        if pair in b.tri.pairs:
            region = _neighbour_keys(b.tri, pair)
            tri = rebuild_region(b.tri, real, region)
            self._remove(b.key)
            self._add(BlockState(b.vertices, real, tri))
            return
        (c,) = b.tri.components_with(u, v)
        if c.kind == RIGID:
            tri = rebuild_region(b.tri, real, [c.key])
            self._remove(b.key)
            self._add(BlockState(b.vertices, real, tri))
            return
        self._unfurl_block(b, c, u, v)

    def _unfurl_block(self, b: BlockState, s: TriComponent, u: int, v: int) -> None:
        """The block loses a cycle edge and becomes a path of blocks."""
        assert b.tri is not None
        order = list(s.cycle_order)
        i = order.index(u)
        order = order[i:] + order[:i]
        if order[1] == v:
            order = [u] + order[1:][::-1]
        # now order runs u ... v without the deleted edge
        self._remove(b.key)
        real = b.edges - {edge_key(u, v)}
        for x, y in zip(order, order[1:]):
            p = frozenset((x, y))
            if p not in b.tri.pairs:
                ek = edge_key(x, y)
                self._add(BlockState(frozenset(ek), frozenset([ek])))
                continue
            comps, pairs = _hanging(b.tri, p, s.key)
            vs = frozenset().union(*comps)
            sub_real = frozenset(ed for ed in real if ed[0] in vs and ed[1] in vs)
            sub = assemble(sub_real, ((b.tri.components[k].kind, k) for k in comps), pairs)
            region = [k for k in comps if p <= k]
            tri = rebuild_region(sub, sub_real, region)
            self._add(BlockState(vs, sub_real, tri))


def _hanging(tree: TriTree, pair: frozenset[int], avoid: frozenset[int]) -> tuple[list[frozenset[int]], set[frozenset[int]]]:
    """Components and pairs reachable from ``pair`` without entering ``avoid``."""
    start = ("P", pair)
    seen = {start, ("C", avoid)}
    queue = deque([start])
    comps: list[frozenset[int]] = []
    pairs: set[frozenset[int]] = set()
    while queue:
        node = queue.popleft()
        if node[0] == "C":
            comps.append(node[1])
        else:
            pairs.add(node[1])
        for nb in tree.neighbours(node):  # type: ignore[arg-type]
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return comps, pairs


def update_decomposition(state: DecompositionState, e: ChangeEvent, t: ChangeType) -> DecompositionState:
    """Functional wrapper: returns an updated copy, leaving ``state`` untouched."""
    out = state.copy()
    out.apply(e, t)
    return out


def from_scratch_canonical(g: DynamicGraph) -> frozenset:
    return DecompositionState.from_graph(g).canonical()
