import random
from fractions import Fraction

import pytest

import oracles
from veerscan import data
from veerscan.cusp import CuspTrack
from veerscan.faces import Analysis
from veerscan.linalg import matvec, rank
from veerscan.weights import (
    HomologyModel,
    Infeasible,
    boundary_track_weights,
    branching_system,
    chi,
    class_map,
    feasible_weight_for,
    fmt,
)

TAUT = data.VEERING + data.NOT_VEERING


def lib_order(t):
    """Index map from the oracle's face order to the library's."""
    keys = sorted({(r[0], r[1]) for r in oracles.face_reps(t).values()})
    return [keys.index(fc.rep) for fc in t.face_classes]


@pytest.mark.parametrize("name", TAUT)
def test_equations_match_hand_count(load, name):
    t = load(name)
    sysm = branching_system(t)
    order = lib_order(t)
    _, rows = oracles.equations_by_hand(t)
    mine = sorted(tuple(r[k] for k in order) for r in rows)
    assert sorted(tuple(r) for r in sysm.equations) == mine
    assert len(sysm.equations) == len(t.edge_classes)


def test_fig8_system(load):
    t = load("fig8")
    sysm = branching_system(t)
    assert len(sysm.equations) == 2 and sysm.n_faces == 4
    assert len(sysm.basis) == 2
    assert sorted(sysm.rays) == [(0, 1, 0, 1), (1, 0, 1, 0)]
    assert [sysm.chi_of(r) for r in sysm.rays] == [-1, -1]


@pytest.mark.parametrize("name", ["fig8", "m003", "fig8_typeswap_a"])
def test_brute_force_solutions_span_v(load, name):
    t = load(name)
    sysm = branching_system(t)
    order = lib_order(t)
    _, sols = oracles.integral_solutions(t, 3)
    sols = [[w[k] for k in order] for w in sols]
    assert all(sysm.in_a(w) for w in sols)
    assert rank(sols) == rank([list(r) for r in sysm.rays])
    if name in data.VEERING:
        assert rank(sols) == len(sysm.basis)


@pytest.mark.parametrize("name", TAUT)
def test_all_ones_vector(load, name):
    t = load(name)
    sysm = branching_system(t)
    ones = [1] * sysm.n_faces
    balanced = all(len(s1) == len(s2) for s1, s2 in (e.sides() for e in t.edge_classes))
    assert sysm.in_v(ones) == balanced


@pytest.mark.parametrize("name", TAUT)
def test_zero_vector(load, name):
    t = load(name)
    sysm = branching_system(t)
    zero = [0] * sysm.n_faces
    assert sysm.in_a(zero)
    assert chi(sysm, zero) == 0
    for ct in [CuspTrack(t, c) for c in range(t.num_cusps)]:
        assert all(x == 0 for x in boundary_track_weights(t, zero, ct))


@pytest.mark.parametrize("name", TAUT)
def test_chi_is_faces_minus_edge_crossings(load, name):
    t = load(name)
    sysm = branching_system(t)
    rng = random.Random(name)
    for _ in range(10):
        coeffs = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in sysm.basis]
        w = [sum((c * b[i] for c, b in zip(coeffs, sysm.basis)), Fraction(0)) for i in range(sysm.n_faces)]
        assert sysm.chi_of(w) == sum(w) - sum(sysm.m(w))
        assert sysm.chi_of([2 * x for x in w]) == 2 * sysm.chi_of(w)


@pytest.mark.parametrize("name", TAUT)
def test_rays_against_cell_complex(load, name):
    t = load(name)
    sysm = branching_system(t)
    inv = lib_order(t)
    tracks = [CuspTrack(t, c) for c in range(t.num_cusps)]
    for r in sysm.rays:
        w = [0] * sysm.n_faces
        for lib_i, ora_i in enumerate(inv):
            w[ora_i] = r[lib_i]
        surf = oracles.carried_surface(t, w)
        assert surf["chi"] == sysm.chi_of(r)
        assert surf["orientable"]
        assert surf["circles"] == sum(ct.trace(boundary_track_weights(t, r, ct)) for ct in tracks)


@pytest.mark.parametrize("name", data.VEERING)
def test_no_disks_or_spheres(load, name):
    t = load(name)
    sysm = branching_system(t)
    for r in sysm.rays:
        assert sysm.chi_of(r) < 0
    if t.tets <= 4:
        order = lib_order(t)
        _, sols = oracles.integral_solutions(t, 2)
        for w in sols:
            w = [w[k] for k in order]
            if any(w):
                assert sysm.chi_of(w) < 0


@pytest.mark.parametrize("name", data.VEERING)
def test_boundary_weights_balance_switches(load, name):
    t = load(name)
    model = HomologyModel(t)
    for r in model.system.rays:
        for ct in model.tracks:
            x = boundary_track_weights(t, r, ct)
            assert all(v == 0 for v in matvec(ct.switch_matrix(), x))


@pytest.mark.parametrize("name", data.VEERING)
def test_boundary_of_class_is_class_of_boundary(load, name):
    t = load(name)
    model = HomologyModel(t)
    rng = random.Random(name)
    basis = model.system.basis
    for _ in range(10):
        coeffs = [Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in basis]
        w = [sum((c * b[i] for c, b in zip(coeffs, basis)), Fraction(0)) for i in range(model.system.n_faces)]
        assert model.system.in_v(w)
        h = class_map(model, w)
        assert model.boundary(h) == model.boundary_of_weights(w)


@pytest.mark.parametrize("name", data.VEERING)
def test_class_map_linear_and_kernel_invariant(load, name):
    t = load(name)
    model = HomologyModel(t)
    basis = model.system.basis
    kernel = [b for b in basis if not any(model.class_map(b))]
    u, v = basis[0], basis[-1]
    s = [a + 3 * b for a, b in zip(u, v)]
    assert model.class_map(s) == tuple(a + 3 * b for a, b in zip(model.class_map(u), model.class_map(v)))
    for k in kernel:
        assert model.class_map([a + b for a, b in zip(u, k)]) == model.class_map(u)


def test_fig8_class_map_rank_one_and_fiber(load):
    t = load("fig8")
    model = HomologyModel(t)
    assert model.b1 == 1 and model.rank_of_image() == 1
    w = feasible_weight_for(model, (1,))
    assert model.system.in_a(w)
    assert model.system.chi_of(w) == -1
    with pytest.raises(Infeasible):
        feasible_weight_for(model, (-1,))
    assert all(x == 0 for x in feasible_weight_for(model, (0,)))


def test_relative_h2_ranks(load):
    got = {name: HomologyModel(load(name)).b1 for name in data.VEERING}
    assert got == {"fig8": 1, "m003": 1, "m016": 1, "m119": 1, "m203": 2, "m367": 2}


def test_feasible_weight_is_deterministic(load):
    t = load("m203")
    a = HomologyModel(t).feasible_weight_for((1, 1))
    b = HomologyModel(t).feasible_weight_for((1, 1))
    assert a == b


@pytest.mark.parametrize("name", data.VEERING)
def test_chi_constant_on_fibres(load, name):
    a = Analysis(load(name))
    for r in a.cone.rays:
        lo, hi = a.model.chi_range(r)
        assert lo == hi


def test_json_rationals(load):
    d = HomologyModel(load("m203")).as_dict()
    assert d["b2_punctured"] == 2
    assert all(isinstance(x, str) for row in d["L"] for x in row)
    assert fmt(Fraction(-3, 6)) == "-1/2" and fmt(4) == "4"
    assert branching_system(load("fig8")).as_dict()["chi"] == [fmt(c) for c in branching_system(load("fig8")).chi]
