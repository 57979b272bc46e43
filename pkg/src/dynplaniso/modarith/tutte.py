"""Tutte matrices mod p and bundles kept up to date by low-rank updates.

A bundle for host H, pins and prime p stores T^-1 together with T^-1 L,
L^T T^-1 and L^T T^-1 L (L the Laplacian of H). Every operation below
produces the bundle of a changed host from existing bundles through
Sherman-Morrison-Woodbury updates of rank at most six, or through the
block-overlap construction for two hosts glued along a pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ..errors import IllegalChange, PreconditionError
from ..graph import Edge, StaticGraph, edge_key
from .zp import invert_gauss, mm

DEFAULT_POSITIONS = ((0, 0), (1, 0), (0, 1))

# Test-only fault switch: flips the sign of the deletion update in smw_edge.
FAULTS: dict[str, bool] = {"smw_sign": False}


def set_fault(name: str, on: bool) -> None:
    if name not in FAULTS:
        raise KeyError(name)
    FAULTS[name] = on


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


_LAP_CACHE: dict[StaticGraph, np.ndarray] = {}


def laplacian(h: StaticGraph, order: Sequence[int] | None = None) -> np.ndarray:
    """Graph Laplacian; the default (sorted) order is cached and returned read-only."""
    if order is None:
        hit = _LAP_CACHE.get(h)
        if hit is None:
            if len(_LAP_CACHE) > 50000:
                _LAP_CACHE.clear()
            hit = _build_laplacian(h, tuple(sorted(h.vertices)))
            hit.flags.writeable = False
            _LAP_CACHE[h] = hit
        return hit
    return _build_laplacian(h, tuple(order))


def _build_laplacian(h: StaticGraph, order: tuple[int, ...]) -> np.ndarray:
    idx = {v: i for i, v in enumerate(order)}
    n = len(order)
    lap = np.zeros((n, n), dtype=np.int64)
    for u, v in h.edges:
        i, j = idx[u], idx[v]
        lap[i, j] -= 1
        lap[j, i] -= 1
        lap[i, i] += 1
        lap[j, j] += 1
    return lap


def tutte_matrix(h: StaticGraph, pins: Iterable[int], order: Sequence[int] | None = None) -> np.ndarray:
    """Laplacian with the pinned rows replaced by unit rows (integer entries)."""
    order = tuple(sorted(h.vertices)) if order is None else tuple(order)
    idx = {v: i for i, v in enumerate(order)}
    t = laplacian(h, order).copy()
    for v in pins:
        i = idx[v]
        t[i] = 0
        t[i, i] = 1
    return t


def _unit(n: int, i: int) -> np.ndarray:
    e = np.zeros(n, dtype=np.int64)
    e[i] = 1
    return e


# ---------------------------------------------------------------------------
# Bundles
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Bundle:
    host: StaticGraph
    pins: tuple[int, ...]
    p: int
    tinv: np.ndarray
    colL: np.ndarray  # T^-1 L
    rowL: np.ndarray  # L^T T^-1
    bilin: np.ndarray  # L^T T^-1 L

    @property
    def order(self) -> tuple[int, ...]:
        return self.host.vertices

    @cached_property
    def index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.host.vertices)}

    @property
    def n(self) -> int:
        return len(self.host.vertices)

    def same_as(self, other: "Bundle") -> bool:
        """Entrywise equality of all fields (pins compared as a set)."""
        return (
            self.p == other.p
            and self.host.vertices == other.host.vertices
            and self.host.edges == other.host.edges
            and set(self.pins) == set(other.pins)
            and all(
                np.array_equal(a, b)
                for a, b in (
                    (self.tinv, other.tinv),
                    (self.colL, other.colL),
                    (self.rowL, other.rowL),
                    (self.bilin, other.bilin),
                )
            )
        )

    def check_identity(self) -> bool:
        t = tutte_matrix(self.host, self.pins) % self.p
        return bool(np.array_equal(mm(t, self.tinv, self.p), np.eye(self.n, dtype=np.int64)))

    def with_pin_order(self, pins: Sequence[int]) -> "Bundle":
        if set(pins) != set(self.pins):
            raise PreconditionError("only the order of the pins may change here")
        return Bundle(self.host, tuple(pins), self.p, self.tinv, self.colL, self.rowL, self.bilin)


def _host(vertices: Iterable[int], edges: Iterable[Edge]) -> StaticGraph:
    return StaticGraph(tuple(sorted(set(vertices))), frozenset(edge_key(*e) for e in edges))


def _products(host: StaticGraph, tinv: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    lap = laplacian(host) % p
    col = mm(tinv, lap, p)
    row = mm(lap.T, tinv, p)
    return col, row, mm(row, lap, p)


def bundle_init(h: StaticGraph, pins: Sequence[int], p: int) -> Bundle:
    """Full bundle by direct inversion."""
    pins = tuple(pins)
    if len(set(pins)) != len(pins) or not set(pins) <= set(h.vertices):
        raise PreconditionError(f"pins {pins} must be distinct vertices of the host")
    h = _host(h.vertices, h.edges)
    tinv = invert_gauss(tutte_matrix(h, pins), p, "bundle_init")
    return Bundle(h, pins, p, tinv, *_products(h, tinv, p))


def _smw_apply(
    b: Bundle,
    u: np.ndarray,
    v: np.ndarray,
    host: StaticGraph,
    pins: tuple[int, ...],
    where: str,
) -> Bundle:
    """Bundle for T + U V^T on ``host`` (same vertex order as ``b``).

    Every product is carried over with the capacitance K = I + V^T T^-1 U
    and the sparse Laplacian difference; nothing is recomputed from scratch.
    """
    p = b.p
    tinv, col, row, bil = b.tinv, b.colL, b.rowL, b.bilin
    dl = (laplacian(host) - laplacian(b.host)) % p
    touched = np.nonzero(dl.any(axis=0))[0]
    k = u.shape[1] if u.ndim == 2 else 0
    if k:
        u = u % p
        v = v % p
        a = mm(tinv, u, p)  # n x k
        bb = mm(v.T, tinv, p)  # k x n
        cap = (np.eye(k, dtype=np.int64) + mm(v.T, a, p)) % p
        kinv = invert_gauss(cap, p, where)
        akinv = mm(a, kinv, p)
        tinv2 = (tinv - mm(akinv, bb, p)) % p
        # T'^-1 L and L^T T'^-1 and L^T T'^-1 L
        col_l = (col - mm(akinv, mm(v.T, col, p), p)) % p
        ru = mm(row, u, p)
        row_l = (row - mm(mm(ru, kinv, p), bb, p)) % p
        bil_l = (bil - mm(mm(ru, kinv, p), mm(v.T, col, p), p)) % p
    else:
        tinv2, col_l, row_l, bil_l = tinv, col, row, bil
    if touched.size:
        dlj = dl[touched, :]  # rows of dL that are non-zero (dL symmetric)
        col2 = (col_l + mm(tinv2[:, touched], dlj, p)) % p
        row2 = (row_l + mm(dlj.T[:, :], tinv2[touched, :], p)) % p
        # L'^T T'^-1 L' = (L + dL)^T (col2) ; L^T col2 = bil_l + L^T T'^-1 dL
        bil2 = (bil_l + mm(row_l[:, touched], dlj, p) + mm(dlj.T, col2[touched, :], p)) % p
    else:
        col2, row2, bil2 = col_l, row_l, bil_l
    return Bundle(host, pins, p, tinv2, col2, row2, bil2)


# ---------------------------------------------------------------------------
# Edge changes and pin exchange
# ---------------------------------------------------------------------------


def smw_edge(b: Bundle, e: Edge, insert: bool) -> Bundle:
    x, y = e
    key = edge_key(x, y)
    if x == y or x not in b.index or y not in b.index:
        raise IllegalChange(f"edge {e} is not between host vertices")
    if insert == (key in b.host.edges):
        raise IllegalChange(f"edge {e} {'already present' if insert else 'missing'}")
    edges = b.host.edges | {key} if insert else b.host.edges - {key}
    host = StaticGraph(b.host.vertices, edges)
    n, pinned = b.n, set(b.pins)
    i, j = b.index[x], b.index[y]
    s = 1 if insert else -1
    if not insert and FAULTS["smw_sign"]:
        s = 1
    free = [w for w in (x, y) if w not in pinned]
    if len(free) == 2:
        a = _unit(n, i) - _unit(n, j)
        u, v = (s * a)[:, None], a[:, None]
    elif len(free) == 1:
        w = free[0]
        other = y if w == x else x
        u = _unit(n, b.index[w])[:, None]
        v = (s * (_unit(n, b.index[w]) - _unit(n, b.index[other])))[:, None]
    else:
        u = v = np.zeros((n, 0), dtype=np.int64)
    return _smw_apply(b, u, v, host, b.pins, "smw_edge")


def smw_pins(b: Bundle, newpins: Sequence[int]) -> Bundle:
    """Exchange the pinned vertices (rank <= 6 update)."""
    newpins = tuple(newpins)
    if len(set(newpins)) != len(newpins) or not set(newpins) <= set(b.index):
        raise PreconditionError(f"pins {newpins} must be distinct host vertices")
    old, new = set(b.pins), set(newpins)
    if old == new:
        return b.with_pin_order(newpins)
    n = b.n
    lap = laplacian(b.host)
    cols_u, cols_v = [], []
    for w in sorted(old - new):  # becomes a Laplacian row
        i = b.index[w]
        cols_u.append(_unit(n, i))
        cols_v.append(lap[i] - _unit(n, i))
    for w in sorted(new - old):  # becomes a unit row
        i = b.index[w]
        cols_u.append(_unit(n, i))
        cols_v.append(_unit(n, i) - lap[i])
    u = np.stack(cols_u, axis=1)
    v = np.stack(cols_v, axis=1)
    return _smw_apply(b, u, v, b.host, newpins, "smw_pins")


# ---------------------------------------------------------------------------
# Gluing along a pair
# ---------------------------------------------------------------------------


def smw_merge(b1: Bundle, b2: Bundle, pair: tuple[int, int], bridge: tuple[int, int], variant: int = 0) -> Bundle:
    """Bundle of H1 + H2 + bridge, pinned at (v1, v3, v4) (variant 1: (v2, v3, v4)).

    H1, H2 share exactly the pair {v1, v2}; b1 is pinned at {v1, v2, v3}
    and b2 at {v1, v2, v4}. Overlapping T1^-1 and T2^-1 on the pair gives the
    inverse of the matrix R that pins all of v1..v4; a rank-1 update then
    releases the remaining pair vertex.
    """
    v1, v2 = pair
    v3, v4 = bridge
    if b1.p != b2.p:
        raise PreconditionError("bundles use different primes")
    s1, s2 = set(b1.host.vertices), set(b2.host.vertices)
    if s1 & s2 != {v1, v2}:
        raise PreconditionError(f"hosts must share exactly {{{v1}, {v2}}}")
    if v3 not in s1 - s2 or v4 not in s2 - s1:
        raise PreconditionError("bridge must join the private parts of the two hosts")
    if set(b1.pins) != {v1, v2, v3} or set(b2.pins) != {v1, v2, v4}:
        raise PreconditionError("pins must be (pair, bridge end) on each side")
    p = b1.p
    host = _host(s1 | s2, b1.host.edges | b2.host.edges | {edge_key(v3, v4)})
    idx = {v: i for i, v in enumerate(host.vertices)}
    n = len(host.vertices)
    rinv = np.zeros((n, n), dtype=np.int64)
    for b, priv in ((b1, s1 - s2), (b2, s2 - s1)):
        cols = [idx[w] for w in b.host.vertices]
        for w in priv:
            rinv[idx[w], cols] = b.tinv[b.index[w]]
    rinv[idx[v1], idx[v1]] = 1
    rinv[idx[v2], idx[v2]] = 1
    mid = Bundle(host, (v1, v2, v3, v4), p, rinv, *_products(host, rinv, p))
    keep, free = (v1, v2) if variant == 0 else (v2, v1)
    lap = laplacian(host)
    i = idx[free]
    u = _unit(n, i)[:, None]
    v = (lap[i] - _unit(n, i))[:, None]
    return _smw_apply(mid, u, v, host, (keep, v3, v4), "smw_merge")


def smw_split(
    b: Bundle,
    part1: Iterable[int],
    part2: Iterable[int],
    pair: tuple[int, int],
    bridge: tuple[int, int],
) -> tuple[Bundle, Bundle]:
    """Reverse of ``smw_merge``: bundles of host[part1] and host[part2] without the bridge."""
    v1, v2 = pair
    v3, v4 = bridge
    s1, s2 = set(part1), set(part2)
    allv = set(b.host.vertices)
    if s1 & s2 != {v1, v2} or s1 | s2 != allv:
        raise PreconditionError("parts must cover the host and share exactly the pair")
    if v3 not in s1 - s2 or v4 not in s2 - s1:
        raise PreconditionError("bridge must join the private parts")
    if edge_key(v3, v4) not in b.host.edges:
        raise PreconditionError("bridge is not a host edge")
    for x, y in b.host.edges:
        if (x in s1 - s2 and y in s2 - s1) or (y in s1 - s2 and x in s2 - s1):
            if edge_key(x, y) != edge_key(v3, v4):
                raise PreconditionError(f"edge {(x, y)} crosses the split")
    pins = set(b.pins)
    if not ({v3, v4} <= pins and len(pins & {v1, v2}) == 1 and len(pins) == 3):
        raise PreconditionError("bundle must be pinned at one pair vertex and both bridge ends")
    (free,) = {v1, v2} - pins
    n, p = b.n, b.p
    lap = laplacian(b.host)
    i = b.index[free]
    u = _unit(n, i)[:, None]
    v = (_unit(n, i) - lap[i])[:, None]
    mid = _smw_apply(b, u, v, b.host, tuple(b.pins) + (free,), "smw_split")
    out = []
    for part, end in ((s1, v3), (s2, v4)):
        h = b.host.induced(part)
        h = _host(h.vertices, h.edges)
        rows = [b.index[w] for w in h.vertices]
        tinv = mid.tinv[np.ix_(rows, rows)]
        out.append(Bundle(h, (v1, v2, end), p, tinv, *_products(h, tinv, p)))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Composite operations
# ---------------------------------------------------------------------------


def smw_union(b1: Bundle, b2: Bundle, cross: Sequence[tuple[int, int]]) -> Bundle:
    """Bundle of H1 + H2 + cross edges (v1,v4), (v2,v5), (v3,v6), pinned (v1, v4, v6).

    Composition: a 4-cycle (v1, v2, v5, v4) is glued to H1 along {v1, v2}
    and then H2 along {v4, v5}; helper edges are deleted afterwards.
    """
    (v1, v4), (v2, v5), (v3, v6) = cross
    s1, s2 = set(b1.host.vertices), set(b2.host.vertices)
    if s1 & s2:
        raise PreconditionError("hosts must be disjoint")
    if set(b1.pins) != {v1, v2, v3} or set(b2.pins) != {v4, v5, v6}:
        raise PreconditionError("cross edges must join the pins of the two hosts")
    p = b1.p
    quad = _host((v1, v2, v4, v5), [(v1, v2), (v2, v5), (v5, v4), (v4, v1)])
    q = bundle_init(quad, (v1, v2, v4), p)
    m = smw_merge(b1, q, (v1, v2), (v3, v4))
    m = smw_pins(m, (v4, v5, v3))
    m = smw_merge(m, b2, (v4, v5), (v3, v6))
    m = smw_edge(m, (v3, v4), insert=False)
    if edge_key(v1, v2) not in b1.host.edges:
        m = smw_edge(m, (v1, v2), insert=False)
    if edge_key(v4, v5) not in b2.host.edges:
        m = smw_edge(m, (v4, v5), insert=False)
    return smw_pins(m, (v1, v4, v6))


def smw_vertex(b: Bundle, v: int, attach: Sequence[int], add: bool) -> Bundle:
    """Add a fresh vertex joined to three host vertices, or remove a degree-3 vertex.

    Adding glues the triangle (a2, a3, v) along {a2, a3} with bridge (a1, v);
    the result is pinned at (a1, a2, v). Removal expects pins {a1, a2, a3}
    on the returned bundle's host side and runs the steps backwards.
    """
    a1, a2, a3 = attach
    if len({a1, a2, a3}) != 3:
        raise PreconditionError("attachments must be distinct")
    p = b.p
    if add:
        if v in b.index:
            raise PreconditionError(f"vertex {v} already in host")
        if not {a1, a2, a3} <= set(b.index):
            raise PreconditionError("attachments must be host vertices")
        if set(b.pins) != {a1, a2, a3}:
            b = smw_pins(b, (a1, a2, a3))
        tri = bundle_init(_host((a2, a3, v), [(a2, a3), (a3, v), (a2, v)]), (a2, a3, v), p)
        m = smw_merge(b, tri, (a2, a3), (a1, v))
        if edge_key(a2, a3) not in b.host.edges:
            m = smw_edge(m, (a2, a3), insert=False)
        return m.with_pin_order((a1, a2, v))
    if v not in b.index:
        raise PreconditionError(f"vertex {v} not in host")
    if b.host.adj[v] != frozenset((a1, a2, a3)):
        raise PreconditionError(f"vertex {v} must have exactly the neighbours {attach}")
    added = edge_key(a2, a3) not in b.host.edges
    if added:
        b = smw_edge(b, (a2, a3), insert=True)
    b = smw_pins(b, (a2, a1, v))
    rest = [w for w in b.host.vertices if w != v]
    b1, _ = smw_split(b, rest, (a2, a3, v), (a2, a3), (a1, v))
    if added:
        b1 = smw_edge(b1, (a2, a3), insert=False)
    return b1.with_pin_order((a1, a2, a3))


def _pair_roles(h: StaticGraph, v: int, w: int, edges: Sequence[tuple[int, int]]) -> tuple[int, int, int, int]:
    """Attachment cycle (a, b, c, d): v joins a, b and w joins c, d."""
    es = {edge_key(*e) for e in edges}
    if len(es) != 5 or edge_key(v, w) not in es:
        raise PreconditionError("need five edges including (v, v')")
    nv = sorted(x for e in es for x in e if v in e and x not in (v, w))
    nw = sorted(x for e in es for x in e if w in e and x not in (v, w))
    if len(nv) != 2 or len(nw) != 2 or set(nv) & set(nw):
        raise PreconditionError("v and v' need two private attachments each")
    quad = set(nv) | set(nw)
    if not quad <= set(h.vertices):
        raise PreconditionError("attachments must be host vertices")
    sub = {x: h.adj[x] & quad for x in quad}
    if any(len(s) != 2 for s in sub.values()):
        raise PreconditionError("attachment vertices must induce a 4-cycle")
    a, bb = nv
    if bb not in sub[a]:
        raise PreconditionError("v's attachments must be adjacent")
    (c,) = sub[bb] - {a}
    (d,) = sub[a] - {bb}
    if {c, d} != set(nw):
        raise PreconditionError("v' must attach to the opposite side of the 4-cycle")
    return a, bb, c, d


def smw_pair(b: Bundle, v: int, w: int, edges: Sequence[tuple[int, int]], add: bool) -> Bundle:
    """Add or remove two adjacent degree-3 vertices across an induced 4-cycle."""
    if add:
        if v in b.index or w in b.index:
            raise PreconditionError("new vertices must be fresh")
        a, bb, c, d = _pair_roles(b.host, v, w, edges)
        m = smw_vertex(b, w, (c, d, bb), add=True)
        m = smw_vertex(m, v, (a, bb, w), add=True)
        return smw_edge(m, (w, bb), insert=False)
    if v not in b.index or w not in b.index:
        raise PreconditionError("vertices to remove must be in the host")
    es = {edge_key(*e) for e in edges}
    inc = {e for e in b.host.edges if v in e or w in e}
    if es != inc:
        raise PreconditionError("the given edges must be exactly those at v and v'")
    rest = StaticGraph(tuple(x for x in b.host.vertices if x not in (v, w)), b.host.edges - inc)
    a, bb, c, d = _pair_roles(rest, v, w, edges)
    m = smw_edge(b, (w, bb), insert=True)
    m = smw_vertex(m, v, (a, bb, w), add=False)
    return smw_vertex(m, w, (c, d, bb), add=False)


# ---------------------------------------------------------------------------
# Coordinates
# ---------------------------------------------------------------------------


def _residue(x, p: int) -> int:
    f = Fraction(x)
    return f.numerator % p * pow(f.denominator, -1, p) % p


def embed_coords(b: Bundle, positions=DEFAULT_POSITIONS) -> tuple[np.ndarray, np.ndarray]:
    """x = T^-1 b_x and y = T^-1 b_y mod p, indexed like ``b.host.vertices``."""
    p = b.p
    bx = np.zeros(b.n, dtype=np.int64)
    by = np.zeros(b.n, dtype=np.int64)
    for v, (px, py) in zip(b.pins, positions):
        bx[b.index[v]] = _residue(px, p)
        by[b.index[v]] = _residue(py, p)
    return mm(b.tinv, bx, p), mm(b.tinv, by, p)
