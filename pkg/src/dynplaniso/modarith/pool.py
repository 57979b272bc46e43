"""Prime pool, bundle family and the per-change bundle update."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from ..embedding import canonical_faces
from ..errors import NotInvertible, PoolTooSmall
from ..graph import StaticGraph, edge_key
from .primes import DEFAULT_WINDOW, PrimeSource
from .tutte import Bundle, bundle_init, embed_coords, smw_edge, smw_merge, smw_pins, smw_split


@dataclass
class PrimePool:
    size: int = 8
    low_water: int = 4
    window: tuple[int, int] = DEFAULT_WINDOW
    seed: int = 0
    live: list[int] = field(default_factory=list)
    drops: int = 0
    refreshes: int = 0
    drops_since_refresh: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.low_water <= self.size:
            raise ValueError("need 1 <= low_water <= size")
        self.source = PrimeSource(self.seed, self.window)
        if not self.live:
            self.live = self.source.take(self.size)

    def drop(self, p: int) -> None:
        if p in self.live:
            self.live.remove(p)
            self.drops += 1
            self.drops_since_refresh += 1

    @property
    def at_low_water(self) -> bool:
        """True once drops have brought the live count down to the mark."""
        return len(self.live) <= self.low_water

    def replace_all(self) -> None:
        spare = len(self.source.all) - len(self.live) >= self.size
        self.live = self.source.take(self.size, exclude=self.live if spare else ())
        self.refreshes += 1
        self.drops_since_refresh = 0

    def top_up(self) -> list[int]:
        fresh = self.source.take(self.size - len(self.live), exclude=self.live)
        self.live.extend(fresh)
        self.refreshes += 1
        self.drops_since_refresh = 0
        return fresh


def crt_compare(coords1: dict[int, tuple], coords2: dict[int, tuple], pairing, min_primes: int = 1) -> bool:
    """Equal iff paired coordinates agree modulo every surviving prime."""
    if set(coords1) != set(coords2):
        raise ValueError("coordinate sets use different primes")
    if len(coords1) < min_primes:
        raise PoolTooSmall(f"{len(coords1)} primes left, need {min_primes}")
    pairing = list(pairing)
    i = np.array([a for a, _ in pairing], dtype=np.int64)
    j = np.array([b for _, b in pairing], dtype=np.int64)
    for p, (x1, y1) in coords1.items():
        x2, y2 = coords2[p]
        if not (np.array_equal(x1[i], x2[j]) and np.array_equal(y1[i], y2[j])):
            return False
    return True


_PIN_CACHE: dict[StaticGraph, tuple[int, int, int]] = {}


def canonical_pins(h: StaticGraph) -> tuple[int, int, int]:
    """First three vertices of the smallest oriented face (fixed reflection)."""
    hit = _PIN_CACHE.get(h)
    if hit is None:
        f = min(canonical_faces(h), key=lambda f: f.cycle)
        hit = (f.cycle[0], f.cycle[1], f.cycle[2])
        if len(_PIN_CACHE) > 20000:
            _PIN_CACHE.clear()
        _PIN_CACHE[h] = hit
    return hit


# ---------------------------------------------------------------------------
# Family of live bundles
# ---------------------------------------------------------------------------


class BundleFamily:
    """Bundles (one per live prime) for every live rigid host, at canonical pins."""

    def __init__(self, pool: PrimePool | None = None) -> None:
        self.pool = pool or PrimePool()
        self.bundles: dict[StaticGraph, dict[int, Bundle]] = {}
        self.stats: Counter[str] = Counter()
        self._coords: dict[tuple[StaticGraph, tuple[int, ...]], dict[int, tuple[np.ndarray, np.ndarray]]] = {}

    @property
    def primes(self) -> list[int]:
        return list(self.pool.live)

    # -- prime lifecycle ---------------------------------------------------

    def drop(self, primes: Iterable[int]) -> None:
        primes = set(primes)
        if not primes:
            return
        for p in primes:
            self.pool.drop(p)
        for per in self.bundles.values():
            for p in primes:
                per.pop(p, None)
        for per in self._coords.values():
            for p in primes:
                per.pop(p, None)
        if self.pool.at_low_water:
            self.refresh()

    def refresh(self, force: bool = False) -> PrimePool:
        """Top the pool up (or replace it when ``force``) and rebuild every bundle."""
        if not force and len(self.pool.live) == self.pool.size:
            return self.pool
        if force:
            self.pool.replace_all()
        else:
            self.pool.top_up()
        self._coords.clear()
        hosts = list(self.bundles)
        while True:
            bad: set[int] = set()
            fresh: dict[StaticGraph, dict[int, Bundle]] = {}
            for h in hosts:
                fresh[h] = {}
                pins = canonical_pins(h)
                for p in self.pool.live:
                    try:
                        fresh[h][p] = bundle_init(h, pins, p)
                    except NotInvertible:
                        bad.add(p)
            if not bad:
                break
            for p in bad:
                self.pool.drop(p)
            self.pool.top_up()
            self.pool.refreshes -= 1  # one logical refresh
        self.bundles = fresh
        self.stats["refresh"] += 1
        return self.pool

    # -- access ------------------------------------------------------------

    def ensure(self, h: StaticGraph) -> dict[int, Bundle]:
        per = self.bundles.get(h)
        if per is not None and set(per) == set(self.pool.live):
            return per
        per = dict(per or {})
        pins = canonical_pins(h)
        bad = []
        for p in self.pool.live:
            if p in per:
                continue
            try:
                per[p] = bundle_init(h, pins, p)
            except NotInvertible:
                bad.append(p)
        self.bundles[h] = per
        self.stats["init"] += 1
        if bad:
            self.drop(bad)
            return self.ensure(h)
        return per

    def coords(self, h: StaticGraph, pins: tuple[int, int, int]) -> dict[int, tuple[np.ndarray, np.ndarray]]:
        """Tutte coordinates of ``h`` with ``pins`` at the canonical positions, per prime."""
        key = (h, pins)
        hit = self._coords.get(key)
        if hit is not None and set(hit) == set(self.pool.live):
            return hit
        base = self.ensure(h)
        out: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        bad = []
        for p, b in base.items():
            try:
                out[p] = embed_coords(smw_pins(b, pins))
            except NotInvertible:
                bad.append(p)
        if bad:
            self.drop(bad)
            return self.coords(h, pins)
        if len(self._coords) > 50000:
            self._coords.clear()
        self._coords[key] = out
        return out

    def retain(self, hosts: Iterable[StaticGraph]) -> None:
        """Forget bundles of every host not listed (for example stale comparison hosts)."""
        keep = set(hosts)
        for h in [h for h in self.bundles if h not in keep]:
            del self.bundles[h]

    def retire(self, hosts: Iterable[StaticGraph]) -> None:
        for h in hosts:
            self.bundles.pop(h, None)

    def verify(self) -> list[str]:
        """Hosts whose bundles differ from direct recomputation."""
        out = []
        for h, per in self.bundles.items():
            for p, b in per.items():
                ref = bundle_init(h, b.pins, p)
                if not b.same_as(ref) or not b.check_identity():
                    out.append(f"bundle mismatch on host {sorted(h.vertices)} mod {p}")
        return out

    # -- per-change update -------------------------------------------------

    def run_per_prime(self, make: Callable[[int], Bundle]) -> tuple[dict[int, Bundle], list[int]]:
        got: dict[int, Bundle] = {}
        bad: list[int] = []
        for p in self.pool.live:
            try:
                got[p] = make(p)
            except NotInvertible:
                bad.append(p)
        return got, bad


def _rigid_hosts(blocks) -> dict[StaticGraph, tuple[object, object]]:
    out = {}
    for b in blocks:
        if b.tri is None:
            continue
        for c in b.tri.components.values():
            if c.kind == "rigid":
                out[c.graph] = (b, c)
    return out


def _fix_edges(b: Bundle, target: StaticGraph) -> Bundle:
    for e in sorted(target.edges - b.host.edges):
        b = smw_edge(b, e, insert=True)
    for e in sorted(b.host.edges - target.edges):
        b = smw_edge(b, e, insert=False)
    return b


def coherent_update(family: BundleFamily, old_blocks: dict, new_blocks: dict, e=None, t=None) -> BundleFamily:
    """Carry the family across one change.

    ``old_blocks``/``new_blocks`` map block keys to block states before and
    after. New rigid hosts are derived from predecessors by edge updates
    (same vertex set), by gluing predecessor components along their pairs
    (merge) or by cutting a predecessor at the new pairs (split); anything
    else is initialised directly. Primes failing any step are dropped.
    """
    old_changed = [b for k, b in old_blocks.items() if new_blocks.get(k) is not b]
    new_changed = [b for k, b in new_blocks.items() if old_blocks.get(k) is not b]
    old_rigid = _rigid_hosts(old_changed)
    new_rigid = _rigid_hosts(new_changed)
    old_comps = [(b, c) for b in old_changed if b.tri is not None for c in b.tri.components.values()]
    bad: set[int] = set()
    derived: dict[StaticGraph, dict[int, Bundle]] = {}
    for h, (nb, nc) in sorted(new_rigid.items(), key=lambda kv: sorted(kv[0].vertices)):
        if h in family.bundles:
            continue
        route, make = _plan(family, h, nb, nc, old_rigid, old_comps)
        got, failed = family.run_per_prime(make)
        family.stats[route] += 1
        bad.update(failed)
        derived[h] = got
    family.retire(h for h in old_rigid if h not in new_rigid)
    family.bundles.update(derived)
    family.drop(bad)
    for h in derived:
        family.ensure(h)
    return family


def _plan(family: BundleFamily, h: StaticGraph, nb, nc, old_rigid, old_comps):
    vs = frozenset(h.vertices)
    pins = canonical_pins(h)
    # same vertex set: edge updates only
    for oh in old_rigid:
        if frozenset(oh.vertices) == vs and oh in family.bundles:
            src = family.bundles[oh]

            def make(p, src=src):
                return smw_pins(_fix_edges(src[p], h), pins)

            return "smw-edges", make
    # glued from older components
    pieces = [(b, c) for b, c in old_comps if c.vertices <= vs]
    if len(pieces) >= 2 and frozenset().union(*(c.vertices for _, c in pieces)) == vs:
        order = _glue_order([c for _, c in pieces])
        if order is not None:
            return "smw-merge", lambda p: smw_pins(_fix_edges(_glue(family, order, h, p), h), pins)
    # cut out of an older rigid component
    for oh in old_rigid:
        if vs < frozenset(oh.vertices) and oh in family.bundles:
            plan = _cut_plan(nb, nc, frozenset(oh.vertices))
            if plan is not None:
                src = family.bundles[oh]
                return "smw-split", lambda p, src=src: smw_pins(_cut(src[p], plan), pins)
    return "init", lambda p: bundle_init(h, pins, p)


def _glue_order(comps):
    """Order components so that each meets the union of its predecessors in exactly two vertices."""
    rest = sorted(comps, key=lambda c: (c.kind != "rigid", sorted(c.vertices)))
    order = [rest.pop(0)]
    acc = set(order[0].vertices)
    while rest:
        for i, c in enumerate(rest):
            if len(acc & c.vertices) == 2:
                order.append(rest.pop(i))
                acc |= c.vertices
                break
        else:
            return None
    return order


def _glue(family: BundleFamily, order, target: StaticGraph, p: int) -> Bundle:
    def start(c, pins):
        if c.kind == "rigid" and c.graph in family.bundles and p in family.bundles[c.graph]:
            return smw_pins(family.bundles[c.graph][p], pins)
        return bundle_init(c.graph, pins, p)

    acc_vs = set(order[0].vertices)
    acc = None
    for c in order[1:]:
        x, y = sorted(acc_vs & c.vertices)
        left = sorted(acc_vs - {x, y})
        right = sorted(c.vertices - {x, y})
        cands = [(a, b) for a in left for b in right if edge_key(a, b) in target.edges]
        v3, v4 = cands[0] if cands else (left[0], right[0])
        acc = start(order[0], (x, y, v3)) if acc is None else smw_pins(acc, (x, y, v3))
        nxt = start(c, (x, y, v4))
        acc = smw_merge(acc, nxt, (x, y), (v3, v4))
        acc_vs |= c.vertices
    assert acc is not None
    return acc


def _cut_plan(nb, nc, old_vs: frozenset[int]):
    """Steps to cut component ``nc`` out of the old vertex set ``old_vs``."""
    tree = nb.tri
    inside = {k: c for k, c in tree.components.items() if k <= old_vs}
    if frozenset().union(*inside) != old_vs:
        return None
    # the pieces must hang together through pairs
    reached = {nc.vertices}
    stack = [nc.vertices]
    while stack:
        k = stack.pop()
        for k2 in inside:
            if k2 not in reached and len(k & k2) == 2 and (k & k2) in tree.pairs:
                reached.add(k2)
                stack.append(k2)
    if len(reached) != len(inside):
        return None
    edges = frozenset().union(*(c.edges for c in inside.values()))
    whole = StaticGraph(tuple(sorted(old_vs)), edges)
    cuts = []
    for pair in sorted((q for q in tree.pairs if q <= nc.vertices), key=sorted):
        # everything reachable from the pair without entering nc
        seen = {nc.vertices}
        far: set[int] = set()
        stack = [pair]
        seen_p = {pair}
        while stack:
            q = stack.pop()
            for k in inside:
                if q <= k and k not in seen:
                    seen.add(k)
                    far |= k
                    for q2 in tree.pairs:
                        if q2 <= k and q2 not in seen_p:
                            seen_p.add(q2)
                            stack.append(q2)
        if far:
            cuts.append((tuple(sorted(pair)), frozenset(far)))
    left = set(old_vs)
    for (x, y), far in cuts:
        left = (left - far) | {x, y}
    if left != nc.vertices:
        return None
    return whole, cuts


def _cut(b: Bundle, plan) -> Bundle:
    whole, cuts = plan
    b = _fix_edges(b, whole)
    for (x, y), far in cuts:
        cur = set(b.host.vertices)
        side2 = (far & cur) | {x, y}
        side1 = (cur - far) | {x, y}
        v3 = min(side1 - {x, y})
        v4 = min(side2 - {x, y})
        b = smw_edge(b, (v3, v4), insert=True)
        b = smw_pins(b, (x, v3, v4))
        b, _ = smw_split(b, side1, side2, (x, y), (v3, v4))
    return b


def pool_refresh(family: BundleFamily, force: bool = False) -> PrimePool:
    return family.refresh(force=force)
