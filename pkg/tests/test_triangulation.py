import pytest

import oracles
from veerscan import data
from veerscan.triangulation import (
    DanglingTetrahedron,
    EmptyInput,
    Inconsistent,
    MalformedLine,
    MalformedPermutation,
    MissingAngleRecord,
    NonTorusCusp,
    SelfGluingIdentity,
    VtriError,
    parse,
    serialize,
    solve_coorientations,
    validate_taut,
)
from veerscan.torus import CuspComplex, cusp_classes

TAUT = data.VEERING + data.NOT_VEERING


@pytest.mark.parametrize("name", data.ALL)
def test_round_trip_is_byte_identical(name):
    text = data.fixture_text(name)
    once = serialize(parse(text))
    assert serialize(parse(once)) == once
    # fixtures are stored in canonical form
    assert once == text


def test_fig8_parses_with_two_tetrahedra(load):
    assert load("fig8").tets == 2


@pytest.mark.parametrize(
    "text, err",
    [
        ("", EmptyInput),
        ("# only a comment\n\n", EmptyInput),
        ("tets 0\n", MalformedLine),
        ("tets 1\nglue 0 0 -> 0 0 perm 0123\n", SelfGluingIdentity),
        ("tets 1\nglue 0 0 -> 4 0 perm 0123\n", DanglingTetrahedron),
        ("tets 1\nglue 0 0 -> 0 1 perm 0023\n", MalformedPermutation),
        ("tets 1\nglue 0 0 -> 0 1 perm 01234\n", MalformedPermutation),
        ("tets 1\nbogus\n", MalformedLine),
    ],
)
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse(text)


def test_missing_angle_record():
    text = data.fixture_text("fig8")
    lines = [ln for ln in text.splitlines() if not ln.startswith("pi 1")]
    with pytest.raises(MissingAngleRecord):
        parse("\n".join(lines))


def test_parse_error_locates_line():
    text = data.fixture_text("fig8").replace("perm 0132", "perm 0x32", 1)
    with pytest.raises(VtriError) as exc:
        parse(text)
    assert exc.value.line == 2


def test_missing_reverse_record_is_rejected():
    lines = data.fixture_text("fig8").splitlines()
    with pytest.raises(VtriError):
        parse("\n".join(lines[:1] + lines[2:]))


def test_comments_and_blank_lines_ignored(load):
    text = data.fixture_text("fig8")
    noisy = "# fig8\n\n" + text.replace("\n", "  # note\n", 3)
    assert serialize(parse(noisy)) == text


@pytest.mark.parametrize("name", TAUT)
def test_taut_fixtures_validate(load, name):
    assert validate_taut(load(name)) == []


def test_bad_angle_names_edge_angle_sum(load):
    kinds = {v.invariant for v in validate_taut(load("bad_angle"))}
    assert "EdgeAngleSum" in kinds


def test_changing_fig8_pi_pair_breaks_edge_sums(load):
    t = load("fig8")
    for k in range(3):
        if k == t.pi_pairs[0]:
            continue
        text = serialize(t).replace(f"pi 0 {['01-23', '02-13', '03-12'][t.pi_pairs[0]]}", f"pi 0 {['01-23', '02-13', '03-12'][k]}")
        kinds = {v.invariant for v in validate_taut(parse(text))}
        assert "EdgeAngleSum" in kinds


def test_self_glued_pi_edge_tetrahedron_fails():
    text = (
        "tets 1\n"
        "glue 0 0 -> 0 1 perm 1023\nglue 0 1 -> 0 0 perm 1023\n"
        "glue 0 2 -> 0 3 perm 0132\nglue 0 3 -> 0 2 perm 0132\n"
        "pi 0 01-23\n"
    )
    assert validate_taut(parse(text))


@pytest.mark.parametrize("name", ["fig8", "m003", "fig8_typeswap_a", "m016", "m016_adjacent"])
def test_coorientation_solver_matches_exhaustive_search(load, name):
    t = load(name)
    stripped = parse("\n".join(ln for ln in serialize(t).splitlines() if not ln.startswith("coor")))
    solved = solve_coorientations(stripped)
    found = oracles.all_coorientations(t)
    assert solved in found
    # the only other solution is the global flip
    flip = tuple(tuple(not x for x in row) for row in solved)
    assert set(found) == {solved, flip}
    assert solved[0][0] is True
    for row in solved:
        assert sum(row) == 2


def test_three_out_faces_forced_is_inconsistent(load):
    # flip one tetrahedron's pi pair in fig8: the faces of its pi edges can no longer agree
    t = load("bad_angle")
    stripped = parse("\n".join(ln for ln in serialize(t).splitlines() if not ln.startswith("coor")))
    with pytest.raises(Inconsistent) as exc:
        solve_coorientations(stripped)
    assert exc.value.witness


@pytest.mark.parametrize("name", TAUT)
def test_edge_and_face_counts(load, name):
    t = load(name)
    assert sum(e.degree for e in t.edge_classes) == 6 * t.tets
    assert len(t.face_classes) == 2 * t.tets
    assert len(t.edge_classes) == t.tets
    assert len(t.edge_classes) == len(oracles.edge_rings(t))
    for e in t.edge_classes:
        assert len(e.pi_positions) == 2
        s1, s2 = e.sides()
        assert s1 and s2


@pytest.mark.parametrize("name", TAUT)
def test_edge_rings_match_oracle(load, name):
    t = load(name)
    lib = sorted(sorted((c.tet, min(c.a, c.b), max(c.a, c.b)) for c in e.corners) for e in t.edge_classes)
    ora = sorted(sorted((c[0], min(c[1], c[2]), max(c[1], c[2])) for c in ring) for ring in oracles.edge_rings(t))
    assert lib == ora


@pytest.mark.parametrize("name", TAUT)
def test_cusps_match_oracle(load, name):
    t = load(name)
    lib = sorted(sorted(t.cusp_vertices(c)) for c in range(t.num_cusps))
    assert lib == [sorted(g) for g in oracles.vertex_links(t)]


def test_fig8_has_two_edges_one_cusp(load):
    t = load("fig8")
    assert len(t.edge_classes) == 2
    assert t.num_cusps == 1


def test_two_cusp_fixtures(load):
    assert load("m203").num_cusps == 2
    assert load("m367").num_cusps == 2


@pytest.mark.parametrize("name", TAUT)
def test_cusp_complexes_are_tori_with_unimodular_basis(load, name):
    t = load(name)
    for cc in cusp_classes(t):
        cx = cc.complex
        v, e, f = len(cx.switches), len(cx.edges), len(cx.triangles)
        assert v - e + f == 0
        (c1, p1), (c2, p2), _ = cx.basis
        # cycles, and i(b1, b2) = +1 through the push-off functionals
        assert all(x == 0 for x in cx.chain_boundary(c1))
        assert all(x == 0 for x in cx.chain_boundary(c2))
        assert sum(a * b for a, b in zip(c1, p2)) == 1
        assert sum(a * b for a, b in zip(c2, p1)) == -1
        assert cc.class_of(c1) == (1, 0)
        assert cc.class_of(c2) == (0, 1)


def test_peripheral_basis_is_deterministic(load):
    t = load("m203")
    a = [CuspComplex(t, c).basis[0][0] for c in range(2)]
    b = [CuspComplex(parse(serialize(t)), c).basis[0][0] for c in range(2)]
    assert a == b


def test_klein_bottle_cusp_rejected(load):
    t = load("gieseking")
    assert not t.is_orientable
    with pytest.raises(NonTorusCusp):
        CuspComplex(t, 0)


def test_flip_symmetry(load):
    t = load("m003")
    assert validate_taut(t.flipped()) == []
