"""Types of taut tetrahedra relative to a 0-edge, and the veering condition."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .triangulation import PI_PAIRS, TautTriangulation

TYPE_A = "TypeA"
TYPE_B = "TypeB"

# Flattened model tetrahedron: a unit square seen with the coorientation
# towards the viewer, diagonal x-y raised above diagonal z-w.  The
# distinguished 0-edge is x-z (the left side of the square).
_MODEL = {"x": (0, 0, 1), "y": (1, 1, 1), "z": (0, 1, -1), "w": (1, 0, -1)}


def _det3(u, v, w) -> int:
    return (
        u[0] * (v[1] * w[2] - v[2] * w[1])
        - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
    )


def _model_table() -> dict[tuple[int, int, int, int], str]:
    """Type of a positively oriented tetrahedron for each labelling of the model.

    Key ``(x, y, z, w)``: vertex labels of the top pi-edge endpoint on the
    distinguished edge, the other top vertex, the bottom vertex on the
    distinguished edge, and the other bottom vertex.  The model itself is
    TypeA; a labelling whose placement in the model is negatively oriented
    is realised by the mirror image, i.e. TypeB.
    """
    table = {}
    for labels in permutations(range(4)):
        pos = {}
        for role, lab in zip("xyzw", labels):
            pos[lab] = _MODEL[role]
        p0 = pos[0]
        vecs = [tuple(a - b for a, b in zip(pos[k], p0)) for k in (1, 2, 3)]
        table[labels] = TYPE_A if _det3(*vecs) > 0 else TYPE_B
    return table


TYPE_TABLE = _model_table()


class DistinguishedEdgeNotZero(ValueError):
    pass


def top_bottom_pi_edges(t: TautTriangulation, tet: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """(top, bottom) pi-edge: the top one is where the two out-faces meet."""
    p1, p2 = PI_PAIRS[t.pi_pairs[tet]]
    # faces opposite the vertices of p2 contain p1
    if t.is_out(tet, p2[0]):
        return p1, p2
    return p2, p1


def tet_type(t: TautTriangulation, tet: int, edge0: tuple[int, int]) -> str:
    a, b = edge0
    if a == b or t.is_pi(tet, a, b):
        raise DistinguishedEdgeNotZero(f"edge {a}{b} of tet {tet} is not a 0-edge")
    top, bottom = top_bottom_pi_edges(t, tet)
    x = a if a in top else b
    z = b if x == a else a
    (y,) = [v for v in top if v != x]
    (w,) = [v for v in bottom if v != z]
    kind = TYPE_TABLE[(x, y, z, w)]
    if t.orientation_signs[tet] < 0:
        kind = TYPE_B if kind == TYPE_A else TYPE_A
    return kind


@dataclass(frozen=True)
class EdgeVeering:
    edge: int
    ok: bool
    kind: str | None = None  # "adjacent-pi" or "type-mismatch"
    corners: tuple[int, int] | None = None


@dataclass(frozen=True)
class VeeringCertificate:
    veering: bool
    witness: EdgeVeering | None = None

    def reverify(self, t: TautTriangulation) -> bool:
        """Recheck a failure witness directly against the raw gluing data."""
        if self.veering:
            return all(edge_veering_ok(t, e).ok for e in t.edge_classes)
        w = self.witness
        e = t.edge_classes[w.edge]
        i, j = w.corners
        ci, cj = e.corners[i], e.corners[j]
        if w.kind == "adjacent-pi":
            n = e.degree
            return (
                t.is_pi(ci.tet, ci.a, ci.b)
                and t.is_pi(cj.tet, cj.a, cj.b)
                and (abs(i - j) == 1 or abs(i - j) == n - 1)
            )
        return tet_type(t, ci.tet, (ci.a, ci.b)) != tet_type(t, cj.tet, (cj.a, cj.b))

    def as_dict(self) -> dict:
        out = {"veering": self.veering}
        if self.witness is not None:
            out["witness"] = {
                "edge": self.witness.edge,
                "kind": self.witness.kind,
                "corners": list(self.witness.corners),
            }
        return out


def edge_veering_ok(t: TautTriangulation, e) -> EdgeVeering:
    n = e.degree
    pis = e.pi_positions
    for k, i in enumerate(pis):
        j = pis[(k + 1) % len(pis)]
        if len(pis) > 1 and (j - i) % n == 1:
            return EdgeVeering(e.id, False, "adjacent-pi", (i, j))
    first = None
    for i, c in enumerate(e.corners):
        if i in pis:
            continue
        kind = tet_type(t, c.tet, (c.a, c.b))
        if first is None:
            first = (i, kind)
        elif kind != first[1]:
            return EdgeVeering(e.id, False, "type-mismatch", (first[0], i))
    return EdgeVeering(e.id, True)


def is_veering(t: TautTriangulation) -> VeeringCertificate:
    for e in t.edge_classes:
        res = edge_veering_ok(t, e)
        if not res.ok:
            return VeeringCertificate(False, res)
    return VeeringCertificate(True)
