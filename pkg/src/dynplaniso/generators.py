"""Seeded random generators for planar test instances."""

from __future__ import annotations

import random

from .decomp.bctree import biconnected_blocks
from .embedding import trace_faces
from .graph import Edge, StaticGraph, edge_key, is_planar, is_triconnected


def random_planar(rng: random.Random, n: int, m: int) -> StaticGraph:
    """Up to ``m`` random edges on ``n`` vertices, each kept only if planarity survives."""
    edges: set[Edge] = set()
    cands = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(cands)
    for e in cands:
        if len(edges) >= m:
            break
        g = StaticGraph.build(range(n), edges | {e})
        if is_planar(g):
            edges.add(e)
    return StaticGraph.build(range(n), edges)


def random_biconnected(rng: random.Random, n: int, density: float = 0.5) -> StaticGraph:
    """Random biconnected planar graph: a cycle plus planar chords and ears."""
    verts = list(range(n))
    rng.shuffle(verts)
    k = rng.randint(3, n)
    cyc = verts[:k]
    edges = {edge_key(cyc[i], cyc[(i + 1) % k]) for i in range(k)}
    placed = list(cyc)
    for v in verts[k:]:
        a, b = rng.sample(placed, 2)
        trial = edges | {edge_key(v, a), edge_key(v, b)}
        if not is_planar(StaticGraph.build(placed + [v], trial)):
            a, b = next((x, y) for x, y in sorted(edges))
            trial = (edges - {edge_key(a, b)}) | {edge_key(v, a), edge_key(v, b)}
        edges = trial
        placed.append(v)
    cands = [(u, v) for u in placed for v in placed if u < v and (u, v) not in edges]
    rng.shuffle(cands)
    for e in cands[: int(len(cands) * density)]:
        g = StaticGraph.build(placed, edges | {e})
        if is_planar(g):
            edges.add(e)
    return StaticGraph.build(placed, edges)


def random_triconnected(rng: random.Random, n: int, sparse: bool = False) -> StaticGraph:
    """Random 3-connected planar graph grown from K4.

    New vertices go inside a random face and attach to at least three of its
    vertices; with ``sparse`` edges are then removed while 3-connectivity holds.
    """
    n = max(n, 4)
    edges = {edge_key(a, b) for a in range(4) for b in range(a + 1, 4)}
    g = StaticGraph.build(range(4), edges)
    for v in range(4, n):
        faces = sorted(trace_faces(g), key=lambda f: f.cycle)
        f = rng.choice(faces)
        cyc = list(f.cycle)
        k = rng.randint(3, len(cyc))
        picks = rng.sample(cyc, k)
        g = StaticGraph.build(list(g.vertices) + [v], g.edges | {edge_key(v, x) for x in picks})
    if rng.random() < 0.5:
        # planar chords inside faces
        for f in sorted(trace_faces(g), key=lambda f: f.cycle):
            cyc = list(f.cycle)
            if len(cyc) >= 4 and rng.random() < 0.5:
                i, j = sorted(rng.sample(range(len(cyc)), 2))
                if j - i >= 2 and not (i == 0 and j == len(cyc) - 1):
                    e = edge_key(cyc[i], cyc[j])
                    if e not in g.edges:
                        h = g.with_edges(add=[e])
                        if is_planar(h):
                            g = h
    if sparse:
        order = sorted(g.edges)
        rng.shuffle(order)
        for e in order:
            h = g.with_edges(remove=[e])
            if is_triconnected(h):
                g = h
    return g


def relabel(g: StaticGraph, perm: dict[int, int]) -> StaticGraph:
    return StaticGraph.build((perm[v] for v in g.vertices), ((perm[u], perm[v]) for u, v in g.edges))


def disjoint_copy(g: StaticGraph, offset: int, rng: random.Random | None = None) -> tuple[StaticGraph, dict[int, int]]:
    vs = list(g.vertices)
    targets = [offset + i for i in range(len(vs))]
    if rng is not None:
        rng.shuffle(targets)
    perm = dict(zip(vs, targets))
    return relabel(g, perm), perm


def largest_block(g: StaticGraph) -> StaticGraph | None:
    blocks = [b for b in biconnected_blocks(g.adj, g.vertices) if not b.trivial]
    if not blocks:
        return None
    b = max(blocks, key=lambda b: (len(b.edges), sorted(b.vertices)))
    return StaticGraph(tuple(sorted(b.vertices)), b.edges)
