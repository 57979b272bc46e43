"""Isomorphism of triconnected components.

Cycles are compared by length and walking distances. Rigid components are
compared through Tutte-embedding fingerprints: pinning a face triple of
each graph at the same three positions, an isomorphism that maps one triple
onto the other maps every vertex to the vertex with the same coordinates.
Fingerprints only propose a pairing; ``verify_iso`` decides.
"""

from __future__ import annotations

from typing import Iterator, Mapping, Sequence

from .decomp.tritree import CYCLE, TriComponent
from .embedding import canonical_faces
from .errors import FingerprintCollision
from .graph import StaticGraph, edge_key
from .modarith.pool import BundleFamily, canonical_pins

Matching = dict[int, int]


def verify_iso(g1: StaticGraph, g2: StaticGraph, m: Mapping[int, int]) -> bool:
    """True iff ``m`` is a bijection V(g1) -> V(g2) preserving edges and non-edges."""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if set(m) != set(g1.vertices) or set(m.values()) != set(g2.vertices):
        return False
    return all(edge_key(m[u], m[v]) in g2.edges for u, v in g1.edges)


# ---------------------------------------------------------------------------
# Fingerprints
# ---------------------------------------------------------------------------


def fingerprints(family: BundleFamily, h: StaticGraph, pins: tuple[int, int, int]) -> dict[int, tuple]:
    coords = family.coords(h, pins)
    primes = sorted(coords)
    out = {}
    for i, v in enumerate(h.vertices):
        out[v] = tuple((int(coords[p][0][i]), int(coords[p][1][i])) for p in primes)
    return out


def _extract(family: BundleFamily, h1, pins1, h2, pins2) -> Matching | None:
    if h1.n != h2.n or h1.m != h2.m:
        return None
    f1 = fingerprints(family, h1, pins1)
    f2 = fingerprints(family, h2, pins2)
    inv2 = {fp: v for v, fp in f2.items()}
    if len(inv2) != len(f2) or len(set(f1.values())) != len(f1):
        raise FingerprintCollision(f"repeated fingerprint for pins {pins1} / {pins2}")
    m = {}
    for v, fp in f1.items():
        w = inv2.get(fp)
        if w is None:
            return None
        m[v] = w
    return m


def extract_matching(
    family: BundleFamily,
    h1: StaticGraph,
    h2: StaticGraph,
    pins1: tuple[int, int, int],
    pins2: tuple[int, int, int],
) -> Matching | None:
    """Pair vertices with equal fingerprints; one forced refresh on a collision."""
    try:
        return _extract(family, h1, pins1, h2, pins2)
    except FingerprintCollision:
        family.stats["collision"] += 1
        family.refresh(force=True)
    try:
        return _extract(family, h1, pins1, h2, pins2)
    except FingerprintCollision:
        return None


# ---------------------------------------------------------------------------
# Candidate triples
# ---------------------------------------------------------------------------


def face_triples(h: StaticGraph) -> list[tuple[int, int, int]]:
    """Consecutive triples on every face, both directions; faces in lexicographic order."""
    out = []
    for f in sorted(canonical_faces(h), key=lambda f: f.cycle):
        for cyc in (f.cycle, f.cycle[::-1]):
            k = len(cyc)
            for i in range(k):
                out.append((cyc[i], cyc[(i + 1) % k], cyc[(i + 2) % k]))
    return out


def _dart_triples(h: StaticGraph, x: int, y: int) -> list[tuple[int, int, int]]:
    """Triples (x, y, z) with z following y on a face through the dart x -> y (either side)."""
    out = []
    for f in sorted(canonical_faces(h), key=lambda f: f.cycle):
        for cyc in (f.cycle, f.cycle[::-1]):
            k = len(cyc)
            for i in range(k):
                if cyc[i] == x and cyc[(i + 1) % k] == y:
                    out.append((x, y, cyc[(i + 2) % k]))
    return sorted(set(out))


def _own_triple(h: StaticGraph, x: int, y: int) -> tuple[int, int, int]:
    return _dart_triples(h, x, y)[0]


def rigid_isomorphisms(
    family: BundleFamily,
    h1: StaticGraph,
    h2: StaticGraph,
    fixed: tuple[int, int] | None = None,
    fixed2: tuple[int, int] | None = None,
) -> Iterator[Matching]:
    """Verified isomorphisms h1 -> h2 (3-connected planar), optionally sending the edge ``fixed`` to ``fixed2``."""
    if h1.n != h2.n or h1.m != h2.m:
        return
    if sorted(h1.degree(v) for v in h1.vertices) != sorted(h2.degree(v) for v in h2.vertices):
        return
    if fixed is not None:
        assert fixed2 is not None
        t1 = _own_triple(h1, *fixed)
        cands = _dart_triples(h2, *fixed2)
    else:
        t1 = canonical_pins(h1)
        cands = face_triples(h2)
    deg1 = tuple(h1.degree(v) for v in t1)
    seen: set[tuple] = set()
    for t2 in cands:
        if tuple(h2.degree(v) for v in t2) != deg1 or t2 in seen:
            continue
        seen.add(t2)
        m = extract_matching(family, h1, h2, t1, t2)
        if m is not None and verify_iso(h1, h2, m):
            yield m


# ---------------------------------------------------------------------------
# Cycles
# ---------------------------------------------------------------------------


def cycle_isomorphisms(order1: Sequence[int], order2: Sequence[int]) -> Iterator[Matching]:
    """All rotations and reflections between two cycles of equal length."""
    n = len(order1)
    if n != len(order2):
        return
    for step in (1, -1):
        for s in range(n):
            yield {order1[i]: order2[(s + step * i) % n] for i in range(n)}


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


def _as_parts(c: TriComponent | StaticGraph) -> tuple[str, StaticGraph]:
    if isinstance(c, TriComponent):
        return c.kind, c.graph
    return "rigid", c


def iso3_query(
    family: BundleFamily,
    c1: TriComponent | StaticGraph,
    c2: TriComponent | StaticGraph,
    q: Sequence[int],
    q2: Sequence[int],
) -> tuple[bool, Matching | None]:
    """Is there an isomorphism c1 -> c2 sending q[i] to q2[i]?  Returns the witness if so."""
    if len(q) != len(q2) or len(q) < 3:
        raise ValueError("queries name at least three vertices")
    if len(set(q[:3])) < 3 or len(set(q2[:3])) < 3:
        raise ValueError("the first three query vertices must be distinct")
    k1, h1 = _as_parts(c1)
    k2, h2 = _as_parts(c2)
    if (k1 == CYCLE) != (k2 == CYCLE) or h1.n != h2.n or h1.m != h2.m:
        return False, None
    if not set(q) <= set(h1.vertices) or not set(q2) <= set(h2.vertices):
        return False, None
    if k1 == CYCLE:
        o1 = c1.cycle_order if isinstance(c1, TriComponent) else _walk(h1)
        o2 = c2.cycle_order if isinstance(c2, TriComponent) else _walk(h2)
        maps: Iterator[Matching] = cycle_isomorphisms(o1, o2)
    elif h1.has_edge(q[0], q[1]) and h2.has_edge(q2[0], q2[1]):
        maps = rigid_isomorphisms(family, h1, h2, (q[0], q[1]), (q2[0], q2[1]))
    else:
        maps = rigid_isomorphisms(family, h1, h2)
    for m in maps:
        if all(m[a] == b for a, b in zip(q, q2)):
            assert verify_iso(h1, h2, m)
            return True, m
    return False, None


def _walk(h: StaticGraph) -> tuple[int, ...]:
    start = min(h.vertices)
    order = [start]
    prev, cur = start, min(h.adj[start])
    while cur != start:
        order.append(cur)
        a, b = sorted(h.adj[cur])
        prev, cur = cur, (b if a == prev else a)
    return tuple(order)
