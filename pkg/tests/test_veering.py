from itertools import permutations
from types import SimpleNamespace

import pytest

from helpers import relabel, taut_variants
from veerscan import data
from veerscan.cusp import CuspTrack
from veerscan.triangulation import TET_EDGES, perm_sign
from veerscan.veering import (
    TYPE_A,
    TYPE_B,
    TYPE_TABLE,
    DistinguishedEdgeNotZero,
    edge_veering_ok,
    is_veering,
    tet_type,
)

TAUT = data.VEERING + data.NOT_VEERING


def zero_edges(t, k):
    return [e for e in TET_EDGES if not t.is_pi(k, *e)]


def test_table_covers_all_orderings():
    assert len(TYPE_TABLE) == 24
    assert sum(v == TYPE_A for v in TYPE_TABLE.values()) == 12


def test_table_is_a_parity_rule():
    # the model labelled in (x, y, z, w) order is negatively oriented
    for labels, kind in TYPE_TABLE.items():
        assert (kind == TYPE_A) == (perm_sign(labels) < 0)


def test_fig8_types_frozen(load):
    t = load("fig8")
    expected = [TYPE_A, TYPE_B, TYPE_B, TYPE_A]
    for k in range(2):
        assert [tet_type(t, k, e) for e in zero_edges(t, k)] == expected


def test_reversed_orientation_swaps_types(load):
    for name in TAUT:
        t = load(name)
        r = t.reversed()
        for k in range(t.tets):
            for e in zero_edges(t, k):
                assert tet_type(t, k, e) != tet_type(r, k, e)


def test_endpoint_order_does_not_matter(load):
    t = load("m003")
    for k in range(t.tets):
        for a, b in zero_edges(t, k):
            assert tet_type(t, k, (a, b)) == tet_type(t, k, (b, a))


@pytest.mark.parametrize("name", ["fig8", "m016", "m203"])
def test_invariant_under_orientation_preserving_relabelling(load, name):
    t = load(name)
    for rho in permutations(range(4)):
        if perm_sign(rho) < 0:
            continue
        for k in range(t.tets):
            u = relabel(t, k, rho)
            assert is_veering(u).veering == is_veering(t).veering
            for a, b in zero_edges(t, k):
                assert tet_type(u, k, (rho[a], rho[b])) == tet_type(t, k, (a, b))


def test_pi_edge_rejected(load):
    t = load("fig8")
    (a, b), _ = [(p, q) for p, q in TET_EDGES if t.is_pi(0, p, q)][0], None
    with pytest.raises(DistinguishedEdgeNotZero):
        tet_type(t, 0, (a, b))


@pytest.mark.parametrize("name", data.VEERING)
def test_veering_fixtures(load, name):
    t = load(name)
    cert = is_veering(t)
    assert cert.veering and cert.witness is None
    assert all(edge_veering_ok(t, e).ok for e in t.edge_classes)
    assert cert.reverify(t)


@pytest.mark.parametrize("name, kind", [
    ("fig8_typeswap_a", "type-mismatch"),
    ("fig8_typeswap_b", "type-mismatch"),
    ("m016_adjacent", "adjacent-pi"),
])
def test_failure_witnesses_reverify(load, name, kind):
    t = load(name)
    cert = is_veering(t)
    assert not cert.veering
    assert cert.witness.kind == kind
    assert cert.reverify(t)
    assert cert.as_dict()["witness"]["kind"] == kind


def test_degree_two_edge_is_adjacent_pi():
    e = SimpleNamespace(id=0, degree=2, pi_positions=(0, 1), corners=())
    res = edge_veering_ok(None, e)
    assert not res.ok and res.kind == "adjacent-pi"


def _boundary_criterion(t):
    return all(CuspTrack(t, c).dichotomy_ok for c in range(t.num_cusps))


@pytest.mark.parametrize("name", TAUT)
def test_veering_iff_boundary_dichotomy(load, name):
    t = load(name)
    assert is_veering(t).veering == _boundary_criterion(t)


@pytest.mark.parametrize("name", data.VEERING)
def test_veering_iff_boundary_dichotomy_on_all_taut_structures(load, name):
    variants = taut_variants(load(name))
    assert variants
    for u in variants:
        assert is_veering(u).veering == _boundary_criterion(u)
