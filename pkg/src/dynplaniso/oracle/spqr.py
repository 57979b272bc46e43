"""Triconnected components straight from their defining property.

Every 3-connected separating pair is enumerated; a component is an
inclusion-maximal vertex set that no such pair separates, where the pairs
themselves count as edges. Subsets are
enumerated as bitmasks, so this is only usable on small graphs.
"""

from __future__ import annotations

from itertools import combinations

from ..decomp.tritree import CYCLE, RIGID, TriComponent, TriTree
from ..errors import SizeLimit
from ._common import adjacency, pieces, reach

SPQR_SIZE_LIMIT = 14


def _separates(adj: dict[int, set[int]], banned: set[int], x: int, y: int) -> bool:
    return y not in reach(adj, x, banned)


def three_disjoint_paths(adj: dict[int, set[int]], x: int, y: int) -> bool:
    """Three internally disjoint x-y paths, by Menger and separator enumeration."""
    others = [v for v in adj if v not in (x, y)]
    if y in adj[x]:
        # the edge is one path; need two more avoiding it: no single separator in G - xy
        rest = {v: set(nb) for v, nb in adj.items()}
        rest[x].discard(y)
        rest[y].discard(x)
        if y not in reach(rest, x):
            return False
        return not any(_separates(rest, {w}, x, y) for w in others)
    if y not in reach(adj, x):
        return False
    for k in (1, 2):
        for sep in combinations(others, k):
            if _separates(adj, set(sep), x, y):
                return False
    return True


def three_connected_pairs(g) -> set[frozenset[int]]:
    adj = adjacency(g)
    out = set()
    verts = sorted(adj)
    for x, y in combinations(verts, 2):
        rest = [v for v in verts if v not in (x, y)]
        if len(pieces(adj, rest)) < 2:
            continue
        if three_disjoint_paths(adj, x, y):
            out.add(frozenset((x, y)))
    return out


def oracle_spqr(b, limit: int = SPQR_SIZE_LIMIT) -> TriTree:
    adj = adjacency(b)
    verts = sorted(adj)
    n = len(verts)
    if n > limit:
        raise SizeLimit(f"oracle_spqr limited to {limit} vertices")
    bit = {v: 1 << i for i, v in enumerate(verts)}
    pairs = three_connected_pairs(b)
    # Connectivity inside a candidate set counts the virtual edges of the
    # pairs as well; with real edges alone a 3-connected component whose
    # interior hangs together only through virtual edges would be missed.
    aug = {v: set(adj[v]) for v in verts}
    for p in pairs:
        x, y = tuple(p)
        aug[x].add(y)
        aug[y].add(x)
    nbmask = {v: sum(bit[w] for w in aug[v]) for v in verts}
    pair_masks = [sum(bit[v] for v in p) for p in pairs]

    def connected(mask: int) -> bool:
        if mask == 0:
            return True
        low = mask & -mask
        seen = low
        frontier = low
        while frontier:
            nxt = 0
            m = frontier
            while m:
                lb = m & -m
                nxt |= nbmask[verts[lb.bit_length() - 1]]
                m ^= lb
            nxt &= mask & ~seen
            seen |= nxt
            frontier = nxt
        return seen == mask

    good = []
    for mask in range(1, 1 << n):
        if bin(mask).count("1") < 3:
            continue
        if all(connected(mask & ~pm) for pm in pair_masks):
            good.append(mask)
    maximal = [m for m in good if not any(o != m and o & m == m for o in good)]

    edges = {(min(u, v), max(u, v)) for u in adj for v in adj[u]}
    comps: dict[frozenset[int], TriComponent] = {}
    for m in maximal:
        vs = frozenset(v for v in verts if m & bit[v])
        real = frozenset(e for e in edges if e[0] in vs and e[1] in vs)
        virt = frozenset(tuple(sorted(p)) for p in pairs if p <= vs) - real
        allv = real | virt
        deg = {v: 0 for v in vs}
        for u, v in allv:
            deg[u] += 1
            deg[v] += 1
        kind = CYCLE if all(d == 2 for d in deg.values()) else RIGID
        comps[vs] = TriComponent(kind, vs, real, virt)  # type: ignore[arg-type]
    return TriTree(comps, set(pairs))
