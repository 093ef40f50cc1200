import itertools
import json
from types import SimpleNamespace

import pytest

from gchom.graphs import Parity, canonical_data, canonicalize
from gchom.complexes import ComplexSpec, Variant, enumerate_basis
from gchom.cohomology import KNOWN_VALUES
from gchom.kneissler import (
    ImageOutsideSpanError,
    _verify_images_in_span,
    a_graph,
    a_prime_graph,
    barrel,
    build_families,
    build_family,
    dperp_rank,
    restricted_differential,
    upper_bound,
    x_graph,
    y_graph,
)

BOUND_SMALL = {
    (Parity.EVEN, 5): (0, 0, 1, 0, 0),
    (Parity.EVEN, 6): (2, 2, 4, 3, 1),
    (Parity.EVEN, 7): (2, 6, 19, 8, 0),
    (Parity.ODD, 5): (2, 1, 1, 1, 2),
    (Parity.ODD, 6): (3, 3, 4, 4, 2),
    (Parity.ODD, 7): (9, 13, 27, 19, 3),
}


def test_barrel_counts():
    for n in (2, 3, 4, 5):
        for perm in itertools.permutations(range(n)):
            b = barrel(perm)
            assert b.num_vertices == 2 * n
            assert b.num_edges == 3 * n
            assert b.loop_order == n + 1
            assert set(b.degrees()) == {3}


def test_barrel_rejects_bad_input():
    with pytest.raises(ValueError):
        barrel([0])
    with pytest.raises(ValueError):
        barrel([0, 0])


def test_only_one_barrel_in_loop_order_three():
    # both rims degenerate to parallel pairs; the two permutations agree
    forms = {canonical_data(barrel(p))[0] for p in itertools.permutations(range(2))}
    assert len(forms) == 1
    g = forms.pop()
    assert not g.is_simple()
    assert g.loop_order == 3


def test_family_graph_shapes():
    for m in (2, 3, 4):
        for perm in itertools.permutations(range(m)):
            x = x_graph(perm)
            assert x.num_vertices == 2 * m + 1
            assert sorted(x.degrees())[-1] == 4
            assert sorted(x.degrees())[:-1] == [3] * (2 * m)
            assert x.loop_order == m + 2
            y = y_graph(perm)
            assert y.num_vertices == 2 * m + 1
            assert sorted(y.degrees()) == [3] * (2 * m) + [4]
            a = a_graph(perm)
            assert set(a.degrees()) == {3}
            assert a.loop_order == m + 2
            ap = a_prime_graph(perm)
            assert set(ap.degrees()) == {3}
            assert ap.loop_order == m + 2


def test_build_family_rejects_unsupported():
    with pytest.raises(ValueError):
        build_family("B", 4, Parity.EVEN)
    with pytest.raises(ValueError):
        build_family("X", 3, Parity.ODD)
    with pytest.raises(ValueError):
        build_family("Q", 6, Parity.EVEN)


def test_complement_excludes_barrel_isomorphic_graphs():
    for parity in Parity:
        for g in (5, 6):
            fam = build_families(g, parity)
            barrels = {canonical_data(barrel(p))[0]
                       for p in itertools.permutations(range(g - 1))}
            assert not (set(fam.bperp_members) & barrels)
            assert not (set(fam.b_members) - barrels)


def test_barrel_members_live_in_the_top_slice():
    for parity in Parity:
        for g in (5, 6):
            fam = build_families(g, parity)
            top = enumerate_basis(ComplexSpec(parity, Variant.FULL, g), 2 * (g - 1))
            assert set(fam.b_members) <= set(top.generators)
            assert fam.dim_b <= len(top)


@pytest.mark.parametrize("parity,loops", sorted(BOUND_SMALL, key=str))
def test_bound_table_rows(parity, loops):
    rep = upper_bound(loops, parity)
    assert rep.columns() == BOUND_SMALL[(parity, loops)]


@pytest.mark.parametrize("parity,loops", sorted(BOUND_SMALL, key=str))
def test_dperp_surjective(parity, loops):
    rank, dim = dperp_rank(loops, parity)
    assert rank == dim


def test_bound_not_below_known_top_cohomology():
    for g in (5, 6, 7):
        rep = upper_bound(g, Parity.ODD)
        known = KNOWN_VALUES.lookup(3, g, -3)
        assert known is not None
        assert rep.upper_bound >= known.value
        # the published odd bounds are in fact sharp
        assert rep.upper_bound == known.value


def test_rank_stable_across_primes():
    for parity in Parity:
        ranks = {
            p: upper_bound(6, parity, prime=p).rank_d
            for p in (3323, 10007, 32003)
        }
        assert len(set(ranks.values())) == 1


def test_restricted_differential_dimensions():
    fam = build_families(6, Parity.EVEN)
    m = restricted_differential(6, Parity.EVEN)
    assert m.nrows == fam.dim_b + fam.dim_bperp
    assert m.ncols == fam.dim_v


def test_image_outside_span_detection():
    fam = build_families(5, Parity.ODD)
    broken = SimpleNamespace(
        v_members=fam.v_members,
        b_members=(),
        bperp_members=(),
        parity=fam.parity,
    )
    with pytest.raises(ImageOutsideSpanError):
        _verify_images_in_span(broken)


def test_wiedemann_method_agrees():
    g6 = upper_bound(6, Parity.ODD, method="wiedemann", seed=0)
    assert g6.columns() == BOUND_SMALL[(Parity.ODD, 6)]
    assert g6.method == "wiedemann"


def test_report_json_keys():
    rep = upper_bound(5, Parity.ODD, seed=11)
    payload = json.loads(rep.to_json())
    assert list(payload) == ["g", "parity", "dim_B", "dim_Bperp", "dim_V",
                             "rank_d", "upper_bound", "prime", "method", "seed"]
    assert payload["g"] == 5
    assert payload["parity"] == "odd"
    assert payload["seed"] == 11


def test_even_identity_circle_symmetry_vanishes():
    # even loop order: the identity-permutation barrel admits an
    # orientation-reversing symmetry under even parity
    for n in (5, 7):  # loop orders 6 and 8
        b = barrel(list(range(n)))
        assert canonicalize(b, Parity.EVEN).is_zero
