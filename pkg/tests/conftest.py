from __future__ import annotations

import random

import pytest

from dynplaniso.decomp.state import DecompositionState
from dynplaniso.generators import disjoint_copy, random_biconnected
from dynplaniso.graph import DynamicGraph, StaticGraph

# Triangular prism: triangles 123 and 456 joined by 14, 25, 36.
PRISM_EDGES = [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6), (1, 4), (2, 5), (3, 6)]
K4_EDGES = [(a, b) for a in range(1, 5) for b in range(a + 1, 5)]


def static(edges, vertices=()) -> StaticGraph:
    return StaticGraph.build(vertices, edges)


def cycle(vs) -> StaticGraph:
    vs = list(vs)
    return static([(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))])


_ACCEPTANCE: dict[int, str] = {}


def record_acceptance(criterion: int, ok: bool, detail: str) -> None:
    _ACCEPTANCE[criterion] = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter) -> None:
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for k in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[k])


def state_of(n: int, edges) -> DecompositionState:
    return DecompositionState.from_graph(DynamicGraph(n, edges))


def coloured_instance(seed: int, nmax: int = 7):
    """Two disjoint biconnected graphs (often relabelled copies) with vertex colours and a pinned pair on each."""
    rng = random.Random(seed)
    n = rng.randint(3, nmax)
    g = random_biconnected(rng, n, density=rng.random())
    g2, perm = disjoint_copy(g, n, rng)
    if rng.random() < 0.3:
        other = random_biconnected(random.Random(seed + 10_000), n, density=rng.random())
        g2, _ = disjoint_copy(other, n, rng)
    st = DecompositionState.from_graph(DynamicGraph(2 * n, list(g.edges) + list(g2.edges)))
    k = rng.randint(1, 3)
    col = {v: rng.randint(0, k) for v in g.vertices}
    col2 = {perm[v]: c for v, c in col.items()}
    if rng.random() < 0.3:
        col2[rng.choice(sorted(col2))] = rng.randint(0, k)
    a, b = rng.sample(sorted(g.vertices), 2)
    a2, b2 = (perm[a], perm[b]) if rng.random() < 0.6 else rng.sample(sorted(g2.vertices), 2)
    return g, g2, st, col, col2, (a, b, a2, b2)


@pytest.fixture
def prism() -> StaticGraph:
    return static(PRISM_EDGES)


@pytest.fixture
def k4() -> StaticGraph:
    return static(K4_EDGES)
