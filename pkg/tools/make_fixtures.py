"""Regenerate the bundled .vtri fixtures.

Development only: needs SnapPy for the gluing tables.  Angle structures are
found by trying every pi-pair assignment, so nothing depends on the angle
encoding of external censuses.  Run from the repository root:

    python3 tools/make_fixtures.py
"""
from __future__ import annotations

import itertools
import pathlib

import snappy

from veerscan.faces import Analysis
from veerscan.linalg import primitive
from veerscan.triangulation import from_gluing_data, serialize, validate_taut
from veerscan.veering import is_veering

OUT = pathlib.Path(__file__).resolve().parent.parent / "src" / "veerscan" / "fixtures"


def taut_structures(sig: str):
    tri = snappy.Triangulation(sig)
    data = tri._get_tetrahedra_gluing_data()
    for pis in itertools.product(range(3), repeat=tri.num_tetrahedra()):
        t = from_gluing_data(data, pis)
        if not validate_taut(t):
            yield t


def veering_structure(sig: str):
    (t,) = [t for t in taut_structures(sig) if is_veering(t).veering]
    return t


def fiber_boundary_fill(t, h=None):
    """Fill every cusp along the boundary slope of the carried class ``h``
    (default: the sum of the vertex classes)."""
    an = Analysis(t)
    if h is None:
        h = [sum(c) for c in zip(*an.cone.rays)]
    slopes = [primitive(d) for d in an.model.boundary(h)]
    fill = an.filling_data(slopes)
    return tuple((c, p, q) for c, (p, q) in enumerate(fill.meridians))


def with_fills(t, fills):
    return from_gluing_data(
        [([g[0] for g in row], [g[1] for g in row]) for row in t.gluings], t.pi_pairs, t.coorientation, fills
    )


def with_coorientation(t):
    return from_gluing_data(
        [([g[0] for g in row], [g[1] for g in row]) for row in t.gluings], t.pi_pairs, t.coorientations, t.fillings
    )


def main() -> None:
    OUT.mkdir(exist_ok=True)
    files = {}

    fig8 = veering_structure("cPcbbbiht")
    files["fig8"] = with_coorientation(with_fills(fig8, fiber_boundary_fill(fig8)))
    for name, sig in (("m003", "cPcbbbdxm"), ("m016", "dLQacccjsnk"), ("m119", "eLAkaccddjsnak")):
        t = veering_structure(sig)
        files[name] = with_fills(t, fiber_boundary_fill(t))
    two = veering_structure("eLMkbcddddedde")
    # the sum of the vertex classes caps off to a sphere; (1, 2) gives a genus-2 fiber
    files["m203"] = with_fills(two, fiber_boundary_fill(two, [1, 2]))
    lp = veering_structure("fLLQcbecdeepuwsua")
    files["m367"] = with_fills(lp, fiber_boundary_fill(lp))

    broken = [t for t in taut_structures("cPcbbbiht") if not is_veering(t).veering]
    files["fig8_typeswap_a"], files["fig8_typeswap_b"] = broken
    (files["m016_adjacent"],) = [t for t in taut_structures("dLQacccjsnk") if t.pi_pairs == (1, 1, 1)]
    (files["m203_partial"],) = [t for t in taut_structures("eLMkbcddddedde") if t.pi_pairs == (0, 0, 2, 2)]

    # one changed angle pair: no longer taut
    files["bad_angle"] = from_gluing_data(
        [([g[0] for g in row], [g[1] for g in row]) for row in fig8.gluings], (fig8.pi_pairs[0], (fig8.pi_pairs[1] + 1) % 3)
    )
    gies = snappy.Triangulation("m000")
    files["gieseking"] = from_gluing_data(gies._get_tetrahedra_gluing_data(), (0,))

    for name, t in files.items():
        (OUT / f"{name}.vtri").write_text(serialize(t))
        print(name, t.tets, "tets")


if __name__ == "__main__":
    main()
