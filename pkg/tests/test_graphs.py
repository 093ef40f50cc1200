import itertools
import random

import pytest

from gchom.graphs import (
    Multigraph,
    Parity,
    SelfEdgeError,
    automorphism_group_size,
    canonicalize,
    is_connected,
    is_triconnected,
    orientation_sign,
)

import oracles

THETA = Multigraph.from_edges(2, [(0, 1)] * 3)
K4 = Multigraph.from_edges(4, itertools.combinations(range(4), 2))
PATH2 = Multigraph.from_edges(3, [(0, 1), (1, 2)])
SIX_CYCLE = Multigraph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])


def random_multigraph(rng, num_vertices, num_edges):
    pairs = list(itertools.combinations(range(num_vertices), 2))
    return Multigraph.from_edges(
        num_vertices, (rng.choice(pairs) for _ in range(num_edges))
    )


def test_rejects_self_edges():
    with pytest.raises(SelfEdgeError):
        Multigraph.from_edges(2, [(0, 0)])


def test_theta_even_is_zero():
    # swapping two parallel copies is an odd edge permutation fixing the graph
    assert canonicalize(THETA, Parity.EVEN).is_zero


def test_theta_odd_is_nonzero():
    res = canonicalize(THETA, Parity.ODD)
    assert not res.is_zero
    assert res.sign == 1
    assert res.canonical == THETA


def test_tetrahedron_even_is_nonzero():
    res = canonicalize(K4, Parity.EVEN)
    assert not res.is_zero
    assert res.sign in (+1, -1)


def test_automorphism_group_sizes():
    assert automorphism_group_size(K4) == 24
    assert automorphism_group_size(THETA) == 12
    assert automorphism_group_size(PATH2) == 2


def test_canonicalize_idempotent():
    rng = random.Random(7)
    for _ in range(200):
        g = random_multigraph(rng, rng.randint(2, 7), rng.randint(1, 10))
        for parity in Parity:
            res = canonicalize(g, parity)
            if res.is_zero:
                continue
            again = canonicalize(res.canonical, parity)
            assert again.canonical == res.canonical
            assert again.sign == 1


def test_even_parallel_edges_vanish():
    rng = random.Random(11)
    for _ in range(100):
        g = random_multigraph(rng, rng.randint(2, 6), rng.randint(2, 9))
        if not g.is_simple():
            assert canonicalize(g, Parity.EVEN).is_zero


def test_relabeling_covariance_against_brute_force():
    rng = random.Random(23)
    for _ in range(120):
        n = rng.randint(2, 6)
        g = random_multigraph(rng, n, rng.randint(1, 9))
        perm = list(range(n))
        rng.shuffle(perm)
        h = g.relabel(perm)
        for parity in Parity:
            rg, rh = canonicalize(g, parity), canonicalize(h, parity)
            assert rg.is_zero == rh.is_zero
            if rg.is_zero:
                continue
            assert rg.canonical == rh.canonical
            assert rg.sign * rh.sign == oracles.vertex_orientation_sign(
                g, perm, parity
            )


def test_zero_detection_matches_brute_force():
    rng = random.Random(37)
    for _ in range(150):
        g = random_multigraph(rng, rng.randint(2, 6), rng.randint(1, 9))
        for parity in Parity:
            expected = oracles.brute_canonicalize(g, parity)
            got = canonicalize(g, parity)
            assert got.is_zero == (expected is None)


def test_canonical_form_is_isomorphism_invariant():
    rng = random.Random(41)
    for _ in range(100):
        n = rng.randint(2, 7)
        g = random_multigraph(rng, n, rng.randint(1, 10))
        perm = list(range(n))
        rng.shuffle(perm)
        from gchom.graphs import canonical_data

        assert canonical_data(g)[0] == canonical_data(g.relabel(perm))[0]


def test_orientation_sign_is_multiplicative():
    rng = random.Random(43)
    for _ in range(60):
        n = rng.randint(2, 6)
        g = random_multigraph(rng, n, rng.randint(1, 8))
        p1 = list(range(n))
        p2 = list(range(n))
        rng.shuffle(p1)
        rng.shuffle(p2)
        composed = [p2[p1[i]] for i in range(n)]
        h = g.relabel(p1)
        for parity in Parity:
            if parity is Parity.EVEN and not g.is_simple():
                continue  # stable tie-breaking is only canonical on simple graphs
            s1 = orientation_sign(g, p1, parity)
            s2 = orientation_sign(h, p2, parity)
            assert orientation_sign(g, composed, parity) == s1 * s2


def test_connectivity():
    assert is_connected(Multigraph.from_edges(2, [(0, 1)]))
    two_triangles = Multigraph.from_edges(
        6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    )
    assert not is_connected(two_triangles)
    assert is_connected(K4)


def test_triconnected_examples():
    assert is_triconnected(K4)
    assert not is_triconnected(SIX_CYCLE)
    assert not is_triconnected(THETA)


def test_triconnected_against_networkx():
    nx = pytest.importorskip("networkx")
    rng = random.Random(53)
    checked = 0
    for _ in range(300):
        n = rng.randint(4, 10)
        pairs = list(itertools.combinations(range(n), 2))
        if rng.random() < 0.8:
            k = min(rng.randint(n, 2 * n), len(pairs))
            g = Multigraph.from_edges(n, rng.sample(pairs, k))
        else:
            g = random_multigraph(rng, n, rng.randint(n, 2 * n))
        if not g.is_simple():
            assert not is_triconnected(g)
            continue
        h = nx.Graph()
        h.add_nodes_from(range(n))
        h.add_edges_from(g.edges)
        expected = nx.node_connectivity(h) >= 3
        assert is_triconnected(g) == expected
        checked += 1
    assert checked > 50
