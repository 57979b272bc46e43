"""A session: one dynamic planar graph with its maintained decompositions and bundles."""

from __future__ import annotations

from collections import Counter

from .decomp.state import DecompositionState
from .errors import IllegalChange, InvalidQuery, NonPlanarResult
from .graph import ChangeEvent, ChangeType, DynamicGraph, StaticGraph, edge_key, is_planar
from .iso1 import Iso1
from .iso2 import ClassEngine, iso2_query
from .iso3 import Matching, iso3_query
from .modarith.pool import BundleFamily, PrimePool, coherent_update
from .modarith.primes import DEFAULT_WINDOW


class Session:
    def __init__(
        self,
        n: int,
        seed: int = 0,
        pool_size: int = 8,
        low_water: int = 4,
        prime_window: tuple[int, int] = DEFAULT_WINDOW,
    ) -> None:
        self.n = n
        self.state = DecompositionState.from_graph(DynamicGraph(n))
        pool = PrimePool(size=pool_size, low_water=min(low_water, pool_size), window=prime_window, seed=seed)
        self.family = BundleFamily(pool)
        self.classes = ClassEngine(self.family)
        self.iso1 = Iso1(self.classes)
        self.changes: Counter[str] = Counter()

    @property
    def graph(self) -> DynamicGraph:
        return self.state.graph

    @property
    def drops(self) -> int:
        return self.family.pool.drops

    @property
    def refreshes(self) -> int:
        return self.family.pool.refreshes

    # -- changes ------------------------------------------------------------

    def apply(self, e: ChangeEvent) -> ChangeType:
        g = self.graph
        if not (0 <= e.u < self.n and 0 <= e.v < self.n) or e.u == e.v:
            raise IllegalChange(f"bad edge {e.edge}")
        if e.is_insert:
            if g.has_edge(e.u, e.v):
                raise IllegalChange(f"edge {e.edge} already present")
            if not self._planar_after_insert(e.u, e.v):
                raise NonPlanarResult(f"inserting {e.edge} breaks planarity")
        elif not g.has_edge(e.u, e.v):
            raise IllegalChange(f"edge {e.edge} not present")
        before = dict(self.state.blocks)
        t = self.state.apply(e)
        coherent_update(self.family, before, self.state.blocks, e, t)
        self.iso1.new_epoch()
        self.changes[t.code] += 1
        if len(self.family.bundles) > 4 * len(self.state.blocks) + 64:
            self.family.retain(self.live_hosts())
        return t

    def _planar_after_insert(self, u: int, v: int) -> bool:
        """Planarity is decided block by block, so only the block that gains the edge is tested."""
        st = self.state
        if v not in self.graph.component_of(u):
            return True
        blk = st.shared_block(u, v)
        blocks = [blk] if blk is not None else st.bc_path(u, v)[0]
        vs = frozenset().union(*(b.vertices for b in blocks))
        es = frozenset().union(*(b.edges for b in blocks)) | {edge_key(u, v)}
        return is_planar(StaticGraph(tuple(sorted(vs)), es))

    def insert(self, u: int, v: int) -> ChangeType:
        return self.apply(ChangeEvent.insert(u, v))

    def delete(self, u: int, v: int) -> ChangeType:
        return self.apply(ChangeEvent.delete(u, v))

    # -- queries ------------------------------------------------------------

    def _check(self, *vs: int) -> None:
        for v in vs:
            if not 0 <= v < self.n:
                raise InvalidQuery(f"vertex {v} out of range")

    def components_isomorphic(self, u: int, v: int) -> bool:
        self._check(u, v)
        return self.iso1.components_isomorphic(self.state, u, v)

    def iso1_query(self, a: int, a2: int) -> bool:
        self._check(a, a2)
        return self.iso1.iso1_query(self.state, a, a2)

    def iso2_query(self, a: int, b: int, a2: int, b2: int, colours=None, colours2=None) -> bool:
        self._check(a, b, a2, b2)
        return iso2_query(self.classes, self.state, a, b, a2, b2, colours, colours2)

    def component_of(self, *vs: int):
        """The triconnected component containing all of ``vs``."""
        blk = self.state.shared_block(vs[0], vs[1])
        if blk is None or blk.tri is None or not all(w in blk.vertices for w in vs):
            raise InvalidQuery(f"no triconnected component contains {vs}")
        comps = blk.tri.components_with(*vs)
        if not comps:
            raise InvalidQuery(f"no triconnected component contains {vs}")
        return comps[0]

    def iso3_query(self, q: tuple[int, ...], q2: tuple[int, ...]) -> tuple[bool, Matching | None]:
        self._check(*q, *q2)
        if len(set(q[:3])) < 3 or len(set(q2[:3])) < 3:
            raise InvalidQuery("a, b, c must be distinct")
        c1 = self.component_of(*q)
        c2 = self.component_of(*q2)
        return iso3_query(self.family, c1, c2, q, q2)

    def live_hosts(self) -> set[StaticGraph]:
        return {
            c.graph
            for b in self.state.blocks.values()
            if b.tri is not None
            for c in b.tri.components.values()
            if c.kind == "rigid"
        }

    def verify_bundles(self) -> list[str]:
        return self.family.verify()
