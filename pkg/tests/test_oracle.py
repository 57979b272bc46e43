from __future__ import annotations

import random
from fractions import Fraction

import pytest

from conftest import K4_EDGES, PRISM_EDGES, cycle, static
from dynplaniso.errors import Singular, SizeLimit
from dynplaniso.generators import random_biconnected, random_triconnected
from dynplaniso.modarith import bundle_init, embed_coords
from dynplaniso.oracle import (
    oracle_block,
    oracle_iso,
    oracle_kconn,
    oracle_spqr,
    oracle_tutte_exact,
    three_connected_pairs,
    tutte_determinant,
)

# -- isomorphism --------------------------------------------------------------------


def test_triangle_vs_triangle_and_path():
    tri = cycle(range(3))
    m = oracle_iso(tri, tri)
    assert m is not None and sorted(m.values()) == [0, 1, 2]
    assert oracle_iso(tri, static([(0, 1), (1, 2)], [0, 1, 2])) is None


def test_constraint_with_degree_mismatch():
    path = static([(0, 1), (1, 2)])
    assert oracle_iso(path, path, {1: 0}) is None
    assert oracle_iso(path, path, {0: 2}) == {0: 2, 1: 1, 2: 0}


def test_colours_are_respected():
    path = static([(0, 1), (1, 2)])
    assert oracle_iso(path, path, None, {0: 1}, {0: 1}) == {0: 0, 1: 1, 2: 2}
    assert oracle_iso(path, path, None, {0: 1}, {1: 1}) is None


def test_iso_is_symmetric_on_random_pairs():
    rng = random.Random(1)
    for _ in range(30):
        g = random_biconnected(rng, rng.randint(4, 8), density=rng.random())
        h = random_biconnected(rng, g.n, density=rng.random())
        assert (oracle_iso(g, h) is None) == (oracle_iso(h, g) is None)


def test_iso_size_limit():
    big = cycle(range(20))
    with pytest.raises(SizeLimit):
        oracle_iso(big, big)


# -- connectivity --------------------------------------------------------------------


def test_kconn_examples():
    c4 = cycle(range(4))
    assert oracle_kconn(c4, 0, 2, 2) and not oracle_kconn(c4, 0, 2, 3)
    k4 = static(K4_EDGES)
    assert all(oracle_kconn(k4, a, b, 3) for a, b in K4_EDGES)
    two = static([(0, 1), (2, 3)])
    assert not oracle_kconn(two, 0, 2, 1)


def test_block_lookup():
    bowtie = static([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    verts, _ = oracle_block(bowtie, 0, 1)
    assert sorted(verts) == [0, 1, 2]
    assert oracle_block(bowtie, 0, 3) is None


# -- SPQR ------------------------------------------------------------------------------


def test_spqr_examples():
    assert len(oracle_spqr(static(K4_EDGES)).components) == 1
    t = oracle_spqr(static([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]))
    assert t.pairs == {frozenset({0, 2})} and len(t.components) == 2
    t = oracle_spqr(static([e for e in PRISM_EDGES if e != (1, 4)]))
    assert len(t.components) + len(t.pairs) == 5


def test_spqr_pieces_glue_back():
    rng = random.Random(4)
    for _ in range(30):
        g = random_biconnected(rng, rng.randint(4, 10), density=rng.random())
        t = oracle_spqr(g)
        assert t.real_edges() == g.edges
        assert t.pairs == three_connected_pairs(g)
        # virtual edges only ever stand for separating pairs
        for c in t.components.values():
            for e in c.virtual:
                assert frozenset(e) in t.pairs


# -- exact Tutte ------------------------------------------------------------------------


def test_k4_centroid_exact():
    sol = oracle_tutte_exact(static(K4_EDGES), (1, 2, 3))
    assert sol[4] == (Fraction(1, 3), Fraction(1, 3))


def test_all_pinned_echoes_positions():
    sol = oracle_tutte_exact(cycle([1, 2, 3]), (1, 2, 3))
    assert sol == {1: (0, 0), 2: (1, 0), 3: (0, 1)}


def test_prism_mod_7_matches_modular_solver():
    prism = static(PRISM_EDGES)
    sol = oracle_tutte_exact(prism, (1, 2, 3))
    x, y = embed_coords(bundle_init(prism, (1, 2, 3), 7))
    for i, v in enumerate(prism.vertices):
        fx, fy = sol[v]
        assert int(x[i]) == fx.numerator * pow(fx.denominator, -1, 7) % 7
        assert int(y[i]) == fy.numerator * pow(fy.denominator, -1, 7) % 7


def test_denominators_divide_determinant():
    rng = random.Random(6)
    for _ in range(10):
        g = random_triconnected(rng, rng.randint(4, 6))
        pins = g.vertices[:3]
        det = tutte_determinant(g, pins)
        assert det != 0 and det.denominator == 1
        for fx, fy in oracle_tutte_exact(g, pins).values():
            assert det.numerator % fx.denominator == 0 and det.numerator % fy.denominator == 0


def test_singular_system():
    # two disconnected triangles: the unpinned one has a singular block
    g = static([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    with pytest.raises(Singular):
        oracle_tutte_exact(g, (0, 1, 2))
