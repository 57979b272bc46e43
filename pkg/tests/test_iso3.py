from __future__ import annotations

import random

import pytest

from conftest import K4_EDGES, cycle, static
from dynplaniso.decomp.tritree import build_tri_tree
from dynplaniso.engine import Session
from dynplaniso.errors import InvalidQuery
from dynplaniso.generators import random_triconnected, relabel
from dynplaniso.iso3 import extract_matching, face_triples, iso3_query, rigid_isomorphisms, verify_iso
from dynplaniso.modarith import BundleFamily, PrimePool, pool_refresh
from dynplaniso.oracle import oracle_iso


@pytest.fixture
def fam() -> BundleFamily:
    return BundleFamily(PrimePool(size=4, low_water=2, seed=0))


def cycle_comp(vs):
    (c,) = build_tri_tree(cycle(vs)).components.values()
    return c


# -- verify_iso ----------------------------------------------------------------------


def test_verify_iso_basics():
    path = static([(0, 1), (1, 2)])
    assert verify_iso(path, path, {0: 0, 1: 1, 2: 2})
    assert not verify_iso(path, path, {0: 1, 1: 0, 2: 2})
    assert not verify_iso(path, path, {0: 0, 1: 1})


# -- matching extraction ---------------------------------------------------------------


def test_identity_matching(fam, k4):
    assert extract_matching(fam, k4, k4, (1, 2, 3), (1, 2, 3)) == {1: 1, 2: 2, 3: 3, 4: 4}


def test_k4_shifted_pins(fam, k4):
    m = extract_matching(fam, k4, k4, (1, 2, 3), (2, 3, 4))
    assert m == {1: 2, 2: 3, 3: 4, 4: 1}
    assert verify_iso(k4, k4, m)


def test_size_mismatch_gives_none(fam, k4, prism):
    assert extract_matching(fam, k4, prism, (1, 2, 3), (1, 2, 3)) is None


def test_face_triples_cover_both_directions(k4):
    ts = face_triples(k4)
    assert len(ts) == 4 * 2 * 3
    assert (1, 2, 3) in ts and (3, 2, 1) in ts


# -- queries -----------------------------------------------------------------------------


def test_k4_identity_query(fam, k4):
    ok, m = iso3_query(fam, k4, k4, (1, 2, 3, 4), (1, 2, 3, 4))
    assert ok and m == {1: 1, 2: 2, 3: 3, 4: 4}


def test_c5_rotation_and_reflection(fam):
    c1 = cycle_comp(range(5))
    c2 = cycle_comp(range(10, 15))
    assert iso3_query(fam, c1, c2, (0, 1, 2, 3), (12, 13, 14, 10))[0]
    assert iso3_query(fam, c1, c2, (0, 1, 2, 3), (12, 11, 10, 14))[0]
    assert not iso3_query(fam, c1, c2, (0, 1, 2, 3), (12, 13, 14, 11))[0]
    assert not iso3_query(fam, c1, c2, (0, 1, 3, 4), (10, 11, 12, 13))[0]


def test_mixed_kinds_are_false(fam, k4):
    assert iso3_query(fam, cycle_comp(range(4)), k4, (0, 1, 2, 3), (1, 2, 3, 4)) == (False, None)


def test_prism_vs_k4(fam, k4, prism):
    assert iso3_query(fam, prism, k4, (1, 2, 3, 4), (1, 2, 3, 4)) == (False, None)


def test_prism_reflection(fam, prism):
    # reflection swapping the two triangles
    want = {1: 4, 2: 5, 3: 6, 4: 1, 5: 2, 6: 3}
    assert oracle_iso(prism, prism, want) == want
    ok, m = iso3_query(fam, prism, prism, (1, 2, 3, 4), (4, 5, 6, 1))
    assert ok and m == want and verify_iso(prism, prism, m)
    # a map that keeps 1, 2, 3 but sends 4 away from 1's partner is impossible
    assert not iso3_query(fam, prism, prism, (1, 2, 3, 4), (1, 2, 3, 5))[0]


def test_all_isomorphisms_enumerated(fam, k4, prism):
    assert len(list(rigid_isomorphisms(fam, k4, k4))) == 24
    assert len(list(rigid_isomorphisms(fam, prism, prism))) == 12


def test_bad_query_arguments(fam, k4):
    with pytest.raises(ValueError):
        iso3_query(fam, k4, k4, (1, 1, 2, 3), (1, 2, 3, 4))


def test_session_rejects_repeated_vertices():
    s = Session(5)
    for e in K4_EDGES:
        s.insert(*e)
    with pytest.raises(InvalidQuery):
        s.iso3_query((1, 1, 2, 3), (1, 2, 3, 4))
    with pytest.raises(InvalidQuery):
        s.iso3_query((0, 1, 2, 3), (1, 2, 3, 4))


def test_random_relabelled_hosts_match_oracle(fam):
    rng = random.Random(8)
    for _ in range(30):
        g = random_triconnected(rng, rng.randint(5, 9), sparse=rng.random() < 0.5)
        perm = list(g.vertices)
        rng.shuffle(perm)
        g2 = relabel(g, dict(zip(g.vertices, perm)))
        q = tuple(rng.sample(list(g.vertices), 4))
        q2 = tuple(rng.sample(list(g2.vertices), 4))
        if rng.random() < 0.5:
            q2 = tuple(perm[g.vertices.index(v)] for v in q)
        ok, m = iso3_query(fam, g, g2, q, q2)
        ref = oracle_iso(g, g2, dict(zip(q, q2))) is not None
        assert ok == ref
        if ok:
            assert verify_iso(g, g2, m)


def test_answers_survive_refresh(fam, prism):
    before = [iso3_query(fam, prism, prism, (1, 2, 3, x), (4, 5, 6, y))[0] for x in range(4, 7) for y in range(1, 4)]
    pool_refresh(fam, force=True)
    after = [iso3_query(fam, prism, prism, (1, 2, 3, x), (4, 5, 6, y))[0] for x in range(4, 7) for y in range(1, 4)]
    assert before == after and any(before)
