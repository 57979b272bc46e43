"""Isomorphism of coloured biconnected components.

Every coloured block gets a class id such that two blocks share an id iff
they are isomorphic by a colour-preserving map. Ids are computed over the
tri-tree rooted at its centre: a separating pair (oriented) is described by
its real-edge flag and the multiset of its children's ids, a cycle by the
colour/label sequence of its walk, and a rigid component is compared with
earlier representatives through ``iso3``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .decomp.paths import CoherentPath, common_face_after_insert
from .decomp.tritree import CYCLE, Node, TriTree, build_tri_tree
from .errors import AmbiguousFace, InvalidContext, NotBiconnectedPair
from .graph import Edge, StaticGraph, edge_key
from .iso3 import rigid_isomorphisms
from .modarith.pool import BundleFamily

PARENT = -1
REAL = -2


class Palette:
    """Interns hashable descriptions as small positive integers (0 = uncoloured)."""

    def __init__(self) -> None:
        self._ids: dict[object, int] = {}

    def __call__(self, key: object) -> int:
        got = self._ids.get(key)
        if got is None:
            got = self._ids[key] = len(self._ids) + 1
        return got

    def __len__(self) -> int:
        return len(self._ids)

    def fresh(self) -> int:
        return self(("fresh", len(self._ids)))


@dataclass
class _Rep:
    host: StaticGraph
    colour: dict[int, int]
    labels: dict[tuple[int, int], int]
    root: tuple[int, int] | None
    cid: int


def tree_centre(tree: TriTree) -> Node:
    """The unique centre node (all leaves are components, so the diameter is even)."""
    nodes = tree.nodes()
    deg = {x: len(tree.neighbours(x)) for x in nodes}
    alive = set(nodes)
    layer = [x for x in nodes if deg[x] <= 1]
    while len(alive) > 1:
        nxt = []
        for x in layer:
            alive.discard(x)
            for y in tree.neighbours(x):
                if y in alive:
                    deg[y] -= 1
                    if deg[y] == 1:
                        nxt.append(y)
        if not alive:
            # two centres would mean an odd diameter
            raise AssertionError("tri-tree with two centres")
        layer = nxt
    (c,) = alive
    return c


# ---------------------------------------------------------------------------
# Class computation
# ---------------------------------------------------------------------------


class ClassEngine:
    """Shared palette, rigid representatives and memo tables."""

    MAX_MEMO = 200_000

    def __init__(self, family: BundleFamily | None = None, palette: Palette | None = None) -> None:
        self.family = family or BundleFamily()
        self.palette = palette or Palette()
        self._reps: dict[tuple, list[_Rep]] = {}
        self._blocks: dict[tuple, int] = {}
        self.hits = 0
        self.misses = 0

    def reset(self) -> None:
        """Forget every id; only safe between queries."""
        self.palette = Palette()
        self._reps.clear()
        self._blocks.clear()

    def maybe_reset(self) -> None:
        if len(self.palette) > self.MAX_MEMO:
            self.reset()

    # -- whole blocks ------------------------------------------------------

    def block_class(
        self,
        vertices: frozenset[int],
        edges: frozenset[Edge],
        tree: TriTree | None,
        colour: Mapping[int, int],
    ) -> int:
        col = {v: colour.get(v, 0) for v in vertices}
        if len(edges) == 1:
            (u, v), = edges
            return self.palette(("E",) + tuple(sorted((col[u], col[v]))))
        key = (edges, tuple(col[v] for v in sorted(vertices)))
        hit = self._blocks.get(key)
        if hit is not None:
            self.hits += 1
            return hit
        self.misses += 1
        if tree is None:
            tree = build_tri_tree(StaticGraph(tuple(sorted(vertices)), edges))
        run = _Run(self, tree, edges, col)
        kind, k = tree_centre(tree)
        if kind == "P":
            x, y = sorted(k)
            a, b = run.pair(k, (x, y), None), run.pair(k, (y, x), None)
            cid = self.palette(("BP", min(a, b), max(a, b)))
        else:
            cid = self.palette(("BC", run.comp(k, None)))
        self._blocks[key] = cid
        return cid

    # -- rigid representatives ----------------------------------------------

    def rigid_class(
        self,
        host: StaticGraph,
        colour: dict[int, int],
        labels: dict[tuple[int, int], int],
        root: tuple[int, int] | None,
    ) -> int:
        inv = (
            host.n,
            host.m,
            tuple(sorted((colour[v], host.degree(v)) for v in host.vertices)),
            tuple(sorted(labels.values())),
            None if root is None else (colour[root[0]], colour[root[1]]),
        )
        bucket = self._reps.setdefault(inv, [])
        for rep in bucket:
            if root is None:
                maps = rigid_isomorphisms(self.family, host, rep.host)
            else:
                assert rep.root is not None
                maps = rigid_isomorphisms(self.family, host, rep.host, root, rep.root)
            for m in maps:
                if all(colour[v] == rep.colour[m[v]] for v in host.vertices) and all(
                    lab == rep.labels[(m[u], m[w])] for (u, w), lab in labels.items()
                ):
                    return rep.cid
        cid = self.palette(("rigid", len(self.palette)))
        bucket.append(_Rep(host, colour, labels, root, cid))
        return cid


class _Run:
    """Class computation for one coloured block."""

    def __init__(self, eng: ClassEngine, tree: TriTree, edges: frozenset[Edge], col: dict[int, int]) -> None:
        self.eng = eng
        self.tree = tree
        self.edges = edges
        self.col = col
        self._pairs: dict[tuple, int] = {}
        self._comps: dict[tuple, int] = {}

    def pair(self, pair: frozenset[int], orient: tuple[int, int], parent: frozenset[int] | None) -> int:
        key = (orient, parent)
        hit = self._pairs.get(key)
        if hit is not None:
            return hit
        x, y = orient
        kids = sorted(self.comp(k, orient) for _, k in self.tree.neighbours(("P", pair)) if k != parent)
        cid = self.eng.palette(("P", edge_key(x, y) in self.edges, self.col[x], self.col[y], tuple(kids)))
        self._pairs[key] = cid
        return cid

    def comp(self, k: frozenset[int], root: tuple[int, int] | None) -> int:
        key = (k, root)
        hit = self._comps.get(key)
        if hit is not None:
            return hit
        c = self.tree.components[k]
        rootset = frozenset(root) if root else None
        labels: dict[tuple[int, int], int] = {}
        for u, w in c.edges:
            pe = frozenset((u, w))
            if pe == rootset:
                labels[(u, w)] = labels[(w, u)] = PARENT
            elif pe in self.tree.pairs:
                labels[(u, w)] = self.pair(pe, (u, w), k)
                labels[(w, u)] = self.pair(pe, (w, u), k)
            else:
                labels[(u, w)] = labels[(w, u)] = REAL
        if c.kind == CYCLE:
            cid = self.eng.palette(("cyc", self._cycle_code(c.cycle_order, labels, root)))
        else:
            col = {v: self.col[v] for v in c.vertices}
            cid = self.eng.rigid_class(c.graph, col, labels, root)
        self._comps[key] = cid
        return cid

    def _cycle_code(self, order: Sequence[int], labels, root) -> tuple:
        n = len(order)
        walks = []
        for step in (1, -1):
            for s in range(n):
                walk = [order[(s + step * i) % n] for i in range(n)]
                if root is not None and (walk[0], walk[1]) != root:
                    continue
                walks.append(tuple((self.col[v], labels[(v, walk[(i + 1) % n])]) for i, v in enumerate(walk)))
        return min(walks)


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


def iso2_query(
    eng: ClassEngine,
    state,
    a: int,
    b: int,
    a2: int,
    b2: int,
    colours: Mapping[int, int] | None = None,
    colours2: Mapping[int, int] | None = None,
) -> bool:
    """Coloured blocks of (a, b) and (a2, b2) isomorphic via a map with a -> a2, b -> b2."""
    if a == b or a2 == b2:
        raise NotBiconnectedPair("the two query vertices must differ")
    blk = state.shared_block(a, b)
    blk2 = state.shared_block(a2, b2)
    if blk is None or blk2 is None:
        raise NotBiconnectedPair(f"({a}, {b}) or ({a2}, {b2}) is not inside one block")
    colours = colours or {}
    colours2 = colours2 if colours2 is not None else colours
    if len(blk.vertices) != len(blk2.vertices) or len(blk.edges) != len(blk2.edges):
        return False
    c1 = _pinned(eng, blk, colours, a, b)
    c2 = _pinned(eng, blk2, colours2, a2, b2)
    return c1 == c2


def _pinned(eng: ClassEngine, blk, colours: Mapping[int, int], a: int, b: int) -> int:
    col = external_colours(eng, blk.vertices, colours)
    col[a] = eng.palette(("A", col[a]))
    col[b] = eng.palette(("B", col[b]))
    return eng.block_class(blk.vertices, blk.edges, blk.tri, col)


def external_colours(eng: ClassEngine, vertices, colours: Mapping[int, int]) -> dict[int, int]:
    """Caller colours moved into the palette so they never clash with internal ids."""
    return {v: eng.palette(("c", colours.get(v, 0))) for v in vertices}


def coloured_block_class(eng: ClassEngine, blk, colours: Mapping[int, int]) -> int:
    return eng.block_class(blk.vertices, blk.edges, blk.tri, external_colours(eng, blk.vertices, colours))


# -- contexts -------------------------------------------------------------


@dataclass(frozen=True)
class RecolouredContext:
    """Subtree of a block's tri-tree below ``root`` (seen from ``anchor``), cut at ``hole``."""

    block: object
    root: Node
    hole: Node | None = None
    anchor: Node | None = None
    colours: Mapping[int, int] = field(default_factory=dict)

    def nodes(self) -> list[Node]:
        tree = self.block.tri
        if tree is None or not tree.has_node(self.root):
            raise InvalidContext("root is not a node of the block's tri-tree")
        anchor = self.anchor or tree_centre(tree)
        if not tree.has_node(anchor):
            raise InvalidContext("anchor is not a node of the tri-tree")
        above = tree.path(anchor, self.root)[:-1]
        parent = above[-1] if above else None
        out, stack, seen = [], [self.root], {self.root}
        if parent is not None:
            seen.add(parent)
        while stack:
            x = stack.pop()
            out.append(x)
            if x == self.hole:
                continue
            for y in tree.neighbours(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if self.hole is not None and self.hole not in out:
            raise InvalidContext("hole lies outside the context")
        return out

    def graph(self) -> StaticGraph:
        tree = self.block.tri
        comps = [tree.components[k] for kind, k in self.nodes() if kind == "C"]
        if not comps:
            raise InvalidContext("context without components")
        vs = frozenset().union(*(c.vertices for c in comps))
        es = frozenset().union(*(c.edges for c in comps))
        return StaticGraph(tuple(sorted(vs)), es)

    def colouring(self, palette: Palette) -> dict[int, int]:
        col = {}
        for kind, marked in (("root", self.root), ("hole", self.hole)):
            if marked is None:
                continue
            for v in marked[1]:
                col[v] = palette((kind, self.colours.get(v, 0), col.get(v, 0)))
        return col


def x_iso2(eng: ClassEngine, x: RecolouredContext, x2: RecolouredContext) -> bool:
    """Context graphs isomorphic by a colour-preserving map sending root to root and hole to hole."""
    g1, g2 = x.graph(), x2.graph()
    if g1.n != g2.n or g1.m != g2.m or (x.hole is None) != (x2.hole is None):
        return False
    c1 = eng.block_class(frozenset(g1.vertices), g1.edges, None, x.colouring(eng.palette))
    c2 = eng.block_class(frozenset(g2.vertices), g2.edges, None, x2.colouring(eng.palette))
    return c1 == c2


def sibling_iso_count(
    eng: ClassEngine,
    blk,
    pair: frozenset[int],
    child: frozenset[int],
    colours: Mapping[int, int] | None = None,
    parent: frozenset[int] | None = None,
) -> int:
    """Other children of ``pair`` whose subtrees match ``child``'s with the pair fixed pointwise."""
    tree = blk.tri
    if tree is None or pair not in tree.pairs or child not in tree.components or not pair <= child:
        raise InvalidContext("child is not a component next to the pair")
    if parent is None:
        centre = tree_centre(tree)
        if centre != ("P", pair):
            parent = tree.path(("P", pair), centre)[1][1]
    run = _Run(eng, tree, blk.edges, external_colours(eng, blk.vertices, colours or {}))
    orient = tuple(sorted(pair))
    kids = [k for _, k in tree.neighbours(("P", pair)) if k != parent]
    if child not in kids:
        raise InvalidContext("child is the parent of the pair")
    mine = run.comp(child, orient)
    return sum(1 for k in kids if k != child and run.comp(k, orient) == mine)


def fix_pair_orientation(state, path: CoherentPath, orientation: tuple[int, int]) -> list[tuple[int, int]]:
    """Orient each pair of ``path`` so its first vertex shares a face with the anchors and ``orientation[0]``."""
    a1, a2 = path.anchors
    left = orientation[0]
    out = []
    for p in path.pairs:
        x, y = sorted(p)
        if p == frozenset(orientation):
            out.append(tuple(orientation))
            continue
        ok = [v for v in (x, y) if common_face_after_insert(state, path, {a1, a2, left, v})]
        if len(ok) != 1:
            raise AmbiguousFace(f"pair {sorted(p)}: {len(ok)} candidate vertices share the anchor face")
        (lv,) = ok
        out.append((lv, y if lv == x else x))
    return out
