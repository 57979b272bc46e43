"""Isomorphism of connected components via block-cut trees.

Rooted at a vertex, a component is described by the multiset of classes of
the blocks hanging from it; a block seen from the vertex it hangs on is a
coloured block where that vertex carries a root mark and every other cut
vertex carries the class of what hangs below it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from .errors import InvalidContext
from .iso2 import ClassEngine


@dataclass
class _Epoch:
    vclass: dict[tuple, int] = field(default_factory=dict)
    bclass: dict[tuple, int] = field(default_factory=dict)
    roots: dict[int, int] = field(default_factory=dict)


class Iso1:
    """Vertex-rooted component classes over a decomposition state.

    Memo tables live for one epoch (between two changes); call ``new_epoch``
    after every change.
    """

    def __init__(self, eng: ClassEngine) -> None:
        self.eng = eng
        self.epoch = _Epoch()
        self.stats: Counter[str] = Counter()

    def new_epoch(self) -> None:
        self.epoch = _Epoch()
        self.eng.maybe_reset()

    # -- classes ----------------------------------------------------------

    def vclass(
        self,
        state,
        v: int,
        parent: frozenset[int] | None,
        base: Mapping[int, int] | None = None,
        hole: int | None = None,
    ) -> int:
        """Class of everything hanging from ``v`` except through block ``parent``."""
        memo = base is None and hole is None
        key = (v, parent)
        if memo and key in self.epoch.vclass:
            self.stats["hit"] += 1
            return self.epoch.vclass[key]
        colour = (base or {}).get(v, 0)
        if v == hole:
            cid = self.eng.palette(("H", colour))
        else:
            kids = sorted(
                self.bclass(state, b, v, base, hole) for b in state.blocks_of(v) if b.key != parent
            )
            cid = self.eng.palette(("V", colour, tuple(kids)))
        if memo:
            self.epoch.vclass[key] = cid
        return cid

    def bclass(self, state, blk, r: int, base=None, hole=None) -> int:
        memo = base is None and hole is None
        key = (blk.key, r)
        if memo and key in self.epoch.bclass:
            return self.epoch.bclass[key]
        col = {}
        for w in blk.vertices:
            if w == r:
                col[w] = self.eng.palette(("root", (base or {}).get(w, 0)))
            elif w == hole or state.is_cut_vertex(w):
                col[w] = self.vclass(state, w, blk.key, base, hole)
            else:
                col[w] = self.eng.palette(("leaf", (base or {}).get(w, 0)))
        cid = self.eng.palette(("B", self.eng.block_class(blk.vertices, blk.edges, blk.tri, col)))
        if memo:
            self.epoch.bclass[key] = cid
        return cid

    def root_class(self, state, a: int) -> int:
        hit = self.epoch.roots.get(a)
        if hit is None:
            hit = self.epoch.roots[a] = self.vclass(state, a, None)
        return hit

    # -- library operations --------------------------------------------------

    def colour_cut_vertices(self, state, root: int, recolour: Mapping[int, int] | None = None, hole: int | None = None) -> dict[int, int]:
        """Colours of the cut vertices of ``root``'s component (BC tree rooted at ``root``)."""
        if not 0 <= root < state.graph.n:
            raise InvalidContext(f"unknown vertex {root}")
        out: dict[int, int] = {}
        seen = {root}
        stack: list[tuple[int, frozenset[int] | None]] = [(root, None)]
        while stack:
            v, parent = stack.pop()
            if v == hole:
                out[v] = self.vclass(state, v, parent, recolour, hole)
                continue
            if v != root and state.is_cut_vertex(v):
                out[v] = self.vclass(state, v, parent, recolour, hole)
            for b in state.blocks_of(v):
                if b.key == parent:
                    continue
                for w in b.vertices:
                    if w not in seen:
                        seen.add(w)
                        stack.append((w, b.key))
        return out

    def x_iso1(self, state, root: int, recolour, root2: int, recolour2, hole: int | None = None, hole2: int | None = None) -> bool:
        """Rooted, recoloured components isomorphic with root -> root2 (and hole -> hole2)."""
        if (hole is None) != (hole2 is None):
            return False
        c1 = self.vclass(state, root, None, recolour or {}, hole)
        c2 = self.vclass(state, root2, None, recolour2 or {}, hole2)
        return c1 == c2

    def iso1_query(self, state, a: int, a2: int) -> bool:
        if a == a2:
            return True
        return self.root_class(state, a) == self.root_class(state, a2)

    def components_isomorphic(self, state, u: int, v: int) -> bool:
        cu = state.component_vertices(u)
        cv = state.component_vertices(v)
        if cu == cv:
            return True
        if _invariants(state, cu) != _invariants(state, cv):
            self.stats["quick-no"] += 1
            return False
        target = self.root_class(state, u)
        du = state.graph.degree(u)
        for a in sorted(cv):
            if state.graph.degree(a) == du and self.root_class(state, a) == target:
                return True
        return False


def _invariants(state, comp: frozenset[int]) -> tuple:
    g = state.graph
    degs = sorted(g.degree(x) for x in comp)
    blocks = sorted(
        (len(state.blocks[k].vertices), len(state.blocks[k].edges))
        for k in {k for x in comp for k in state.vblocks.get(x, ())}
    )
    return len(comp), sum(degs), tuple(degs), tuple(blocks)
