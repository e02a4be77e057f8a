"""Train tracks on cusp tori.

Each cusp torus is tiled by flat triangles, one per (tetrahedron, ideal
vertex).  The track edges are the arcs cut out by the faces, and the
switches are the ends of the edges of the triangulation.  A track edge is
oriented as the boundary of its face, where each face is oriented so that
its orientation followed by its coorientation is the orientation of the
manifold.  Consistency of these orientations at every switch is checked
when the track is built.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import lp
from .cone import conic_membership, orthant_section_rays
from .linalg import primitive
from .torus import CuspComplex
from .triangulation import TautTriangulation, other_vertices

UPWARD = "upward"
DOWNWARD = "downward"
LADDERPOLE = "ladderpole"
RUNG = "rung"
ZERO_ZERO = "0-0"
ZERO_PI = "0-pi"


class BandStructureViolated(ValueError):
    def __init__(self, message: str, cell: str | None = None):
        super().__init__(message)
        self.cell = cell


class TrackOrientationError(ValueError):
    pass


@dataclass(frozen=True)
class FlatTriangle:
    tet: int
    vertex: int
    pi_vertex: int  # switch index
    zero_vertices: tuple[int, int]
    kind: str


@dataclass(frozen=True)
class TrackEdge:
    id: int
    face: int
    triangles: tuple[tuple[int, str], tuple[int, str]]  # (flat triangle, role) on each side
    label: str
    sign: int  # +1 when the preferred direction is the canonical one of the torus edge
    tail: int
    head: int


@dataclass(frozen=True)
class SwitchReport:
    switch: int
    edge: int
    end: int
    sides: tuple[tuple[str, ...], tuple[str, ...]]  # kinds of the 0-corner triangles on each side
    ok: bool


@dataclass(frozen=True)
class Ladderpole:
    edges: tuple[int, ...]  # in the order traversed
    kind: str  # kind of the triangles on its left
    homology: tuple[int, int]


@dataclass(frozen=True)
class Band:
    cusp: int
    kind: str
    triangles: tuple[int, ...]
    boundary: tuple[int, int]  # (right, left) ladderpole indices


@dataclass(frozen=True)
class CarriedCurveCone:
    """Cone in H_1 of the cusp torus spanned by positively carried curves."""

    generators: tuple[tuple[int, int], ...]

    def contains(self, h) -> bool:
        return conic_membership(self.generators, h) is not None

    def is_half_plane(self, s) -> bool:
        """True when the cone is exactly ``{h : i(s, h) >= 0}``."""
        if not (self.contains(s) and self.contains(tuple(-x for x in s))):
            return False
        dets = [s[0] * g[1] - s[1] * g[0] for g in self.generators]
        return all(d >= 0 for d in dets) and any(d > 0 for d in dets)


class CuspTrack:
    """The oriented, cooriented train track on one cusp torus."""

    def __init__(self, tri: TautTriangulation, cusp: int):
        self.tri = tri
        self.cusp = cusp
        self.complex = cx = CuspComplex(tri, cusp)
        self.switches = cx.switches
        self.triangles = tuple(self._flat(tr.tet, tr.vertex) for tr in cx.triangles)

        edges = []
        for k, te in enumerate(cx.edges):
            t0, f0, v0 = te.key
            t1, _, perm = tri.glue(t0, f0)
            sides = []
            for t, v in ((t0, v0), (t1, perm[v0])):
                f = f0 if t == t0 and v == v0 else perm[f0]
                role = ZERO_ZERO if f == tri.pi_partner(t, v) else ZERO_PI
                sides.append((cx.triangle_index[(t, v)], role))
            label = LADDERPOLE if all(r == ZERO_PI for _, r in sides) else RUNG
            sign = self._arc_sign(t0, f0, v0)
            tail, head = (te.tail, te.head) if sign > 0 else (te.head, te.tail)
            edges.append(TrackEdge(k, te.face, tuple(sides), label, sign, tail, head))
        self.edges: tuple[TrackEdge, ...] = tuple(edges)
        self.stacks = tuple(self._stack(s) for s in range(len(self.switches)))

    # -- construction -----------------------------------------------------------

    def _flat(self, t: int, v: int) -> FlatTriangle:
        p = self.tri.pi_partner(t, v)
        a, b = other_vertices(v, p)
        kind = UPWARD if self.tri.is_out(t, a) else DOWNWARD
        lv = self.complex.link_vertex
        return FlatTriangle(t, v, lv(t, v, p), (lv(t, v, a), lv(t, v, b)), kind)

    def _arc_sign(self, t: int, f: int, v: int) -> int:
        # the arc at v of a face with cyclic order (v, a, b) runs from (v, b) to (v, a)
        order = self.tri.face_orientation(t, f)
        k = order.index(v)
        beta = order[(k + 2) % 3]
        a0 = other_vertices(f, v)[0]
        return 1 if beta == a0 else -1

    def _stack(self, s: int):
        """(incoming, outgoing) track edges at switch ``s``, bottom to top."""
        tri = self.tri
        eid, end = self.switches[s]
        e = tri.edge_classes[eid]
        p, q = e.pi_positions
        n = e.degree
        side1 = list(range(p, q))
        side2 = [i % n for i in range(q, p + n)]
        c = e.corners[p]
        if tri.is_out(c.tet, c.c):
            side2.reverse()
        else:
            side1.reverse()
        flags = []
        lists = []
        for side in (side1, side2):
            items, outs = [], set()
            for i in side:
                cr = e.corners[i]
                u, x = (cr.a, cr.b) if end == 0 else (cr.b, cr.a)
                order = tri.face_orientation(cr.tet, cr.c)
                k = order.index(u)
                outs.add(order[(k + 2) % 3] == x)
                items.append((self.complex.edge_index[self.complex._edge_key(cr.tet, cr.c, u)]))
            if len(outs) != 1:
                raise TrackOrientationError(f"cusp {self.cusp} switch {s}: mixed directions on one side")
            flags.append(outs.pop())
            lists.append(tuple(items))
        if flags[0] == flags[1]:
            raise TrackOrientationError(f"cusp {self.cusp} switch {s}: both sides point the same way")
        return (lists[1], lists[0]) if flags[0] else (lists[0], lists[1])

    # -- boundary form of the veering condition ----------------------------------

    @cached_property
    def switch_reports(self) -> tuple[SwitchReport, ...]:
        out = []
        for s, (eid, end) in enumerate(self.switches):
            e = self.tri.edge_classes[eid]
            kinds = []
            for side in e.corner_sides():
                ks = []
                for i in side:
                    cr = e.corners[i]
                    v = cr.a if end == 0 else cr.b
                    ks.append(self.triangles[self.complex.triangle_index[(cr.tet, v)]].kind)
                kinds.append(tuple(ks))
            left, right = kinds
            ok = bool(left) and bool(right) and len(set(left)) == 1 and len(set(right)) == 1 and left[0] != right[0]
            out.append(SwitchReport(s, eid, end, (left, right), ok))
        return tuple(out)

    @property
    def dichotomy_ok(self) -> bool:
        return all(r.ok for r in self.switch_reports)

    # -- labels, bands, ladderpoles ------------------------------------------

    def classify_edges(self) -> dict[int, str]:
        return {e.id: e.label for e in self.edges}

    @cached_property
    def bands(self) -> tuple[Band, ...]:
        tris = self.triangles
        for e in self.edges:
            (i, _), (j, _) = e.triangles
            same = tris[i].kind == tris[j].kind
            if e.label == RUNG and not same:
                raise BandStructureViolated(f"rung {e.id} separates an upward and a downward triangle", f"edge {e.id}")
            if e.label == LADDERPOLE and same:
                raise BandStructureViolated(f"ladderpole {e.id} lies inside a {tris[i].kind} region", f"edge {e.id}")

        for s in range(len(self.switches)):
            around = {tris[k].kind for k, tr in enumerate(self.complex.triangles) if s in tr.corners}
            if around != {UPWARD, DOWNWARD}:
                raise BandStructureViolated(f"switch {s} is interior to a region", f"switch {s}")

        poles = self._pole_curves
        on_pole = {}
        for k, (path, _) in enumerate(poles):
            for eid in path:
                on_pole[eid] = k

        parent = list(range(len(tris)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            if e.label == RUNG:
                (i, _), (j, _) = e.triangles
                parent[find(i)] = find(j)
        comps: dict[int, list[int]] = {}
        for k in range(len(tris)):
            comps.setdefault(find(k), []).append(k)

        bands = []
        for members in sorted(comps.values()):
            kind = tris[members[0]].kind
            mset = set(members)
            edge_ids = {e for k in members for e, _ in self.complex.triangles[k].sides}
            verts = {v for k in members for v in self.complex.triangles[k].corners}
            chi = len(verts) - len(edge_ids) + len(members)
            bnd = sorted({on_pole[e] for e in edge_ids if e in on_pole})
            label = f"band at triangle {members[0]}"
            if chi != 0 or len(bnd) != 2:
                raise BandStructureViolated(f"{label} is not an annulus (chi {chi}, {len(bnd)} boundary curves)", label)
            pole_verts = [{self.edges[e].tail for e in poles[b][0]} for b in bnd]
            if pole_verts[0] & pole_verts[1] or verts != pole_verts[0] | pole_verts[1]:
                raise BandStructureViolated(f"{label} is not one edge across", label)
            tails = set()
            for eid in sorted(edge_ids):
                e = self.edges[eid]
                if e.label != RUNG:
                    continue
                if e.tail in pole_verts[0] and e.head in pole_verts[1]:
                    tails.add(0)
                elif e.tail in pole_verts[1] and e.head in pole_verts[0]:
                    tails.add(1)
                else:
                    raise BandStructureViolated(f"rung {eid} does not cross its band", f"edge {eid}")
            if len(tails) != 1:
                raise BandStructureViolated(f"rungs of {label} point both ways", label)
            # rungs run from the right boundary to the left one
            right = bnd[tails.pop()]
            left = bnd[0] if right == bnd[1] else bnd[1]
            bands.append(Band(self.cusp, kind, tuple(members), (right, left)))

        for k in range(len(poles)):
            sides = sorted(b.kind for b in bands if k in b.boundary)
            if sides != [DOWNWARD, UPWARD]:
                raise BandStructureViolated(f"ladderpole {k} does not separate two bands", f"ladderpole {k}")
        return tuple(bands)

    @cached_property
    def _pole_curves(self) -> tuple[tuple[tuple[int, ...], tuple[int, int]], ...]:
        out_edges: dict[int, list[int]] = {}
        in_count: dict[int, int] = {}
        for e in self.edges:
            if e.label == LADDERPOLE:
                out_edges.setdefault(e.tail, []).append(e.id)
                in_count[e.head] = in_count.get(e.head, 0) + 1
        for s in range(len(self.switches)):
            if len(out_edges.get(s, ())) != 1 or in_count.get(s, 0) != 1:
                raise BandStructureViolated(f"ladderpole edges do not form curves at switch {s}", f"switch {s}")
        seen: set[int] = set()
        curves = []
        for e in self.edges:
            if e.label != LADDERPOLE or e.id in seen:
                continue
            path = []
            cur = e.id
            while cur not in seen:
                seen.add(cur)
                path.append(cur)
                cur = out_edges[self.edges[cur].head][0]
            chain = [0] * len(self.edges)
            for k in path:
                chain[k] += self.edges[k].sign
            cls = self.complex.homology_class(chain)
            if cls == (0, 0):
                raise BandStructureViolated(f"ladderpole through edge {e.id} is inessential", f"edge {e.id}")
            curves.append((tuple(path), cls))
        return tuple(curves)

    @cached_property
    def ladderpoles(self) -> tuple[Ladderpole, ...]:
        """Ladderpole curves; upward ones are right boundaries of upward bands."""
        kinds: dict[int, set[str]] = {}
        for b in self.bands:
            right, left = b.boundary
            kinds.setdefault(right, set()).add(UPWARD if b.kind == UPWARD else DOWNWARD)
            kinds.setdefault(left, set()).add(DOWNWARD if b.kind == UPWARD else UPWARD)
        out = []
        for k, (path, cls) in enumerate(self._pole_curves):
            if len(kinds[k]) != 1:
                raise BandStructureViolated(f"ladderpole {k} is both upward and downward", f"ladderpole {k}")
            if any(self._left_kind(e) != UPWARD for e in path):
                raise BandStructureViolated(f"ladderpole {k} has downward triangles on its left", f"ladderpole {k}")
            out.append(Ladderpole(path, kinds[k].pop(), cls))
        return tuple(out)

    def _left_kind(self, eid: int) -> str:
        e = self.edges[eid]
        for k, _ in e.triangles:
            for side, s in self.complex.triangles[k].sides:
                if side == eid and s == e.sign:
                    return self.triangles[k].kind
        raise AssertionError("edge has no triangle on its left")

    def _pole_class(self, kind: str) -> tuple[int, int]:
        classes = {lpc.homology for lpc in self.ladderpoles if lpc.kind == kind}
        if len(classes) != 1:
            raise BandStructureViolated(f"{kind} ladderpoles are not parallel")
        return classes.pop()

    @property
    def s_plus(self) -> tuple[int, int]:
        return self._pole_class(UPWARD)

    @property
    def s_minus(self) -> tuple[int, int]:
        return self._pole_class(DOWNWARD)

    @property
    def slope(self) -> tuple[int, int]:
        return primitive(self.s_plus)

    # -- carried curves ---------------------------------------------------------

    def switch_matrix(self) -> list[list[int]]:
        """Rows: incoming minus outgoing weight at each switch."""
        rows = []
        for s in range(len(self.switches)):
            row = [0] * len(self.edges)
            for e in self.edges:
                if e.head == s:
                    row[e.id] += 1
                if e.tail == s:
                    row[e.id] -= 1
            rows.append(row)
        return rows

    def class_of_weights(self, x) -> tuple:
        chain = [xi * e.sign for xi, e in zip(x, self.edges)]
        return self.complex.homology_class(chain)

    @cached_property
    def carried_cone(self) -> CarriedCurveCone:
        rays = orthant_section_rays(self.switch_matrix(), len(self.edges))
        gens = {primitive(self.class_of_weights(r)) for r in rays}
        gens.discard((0, 0))
        return CarriedCurveCone(tuple(sorted(gens)))

    def max_rung_weight_on_slope(self) -> Fraction:
        """Largest total rung weight of a carried curve with class in R.s, total weight <= 1."""
        n = len(self.edges)
        s = self.s_plus
        a_eq = [list(r) for r in self.switch_matrix()]
        # i(s, class) = 0
        (_, p1), (_, p2), _ = self.complex.basis
        row = []
        for e in self.edges:
            cx, cy = p2[e.id] * e.sign, -p1[e.id] * e.sign
            row.append(s[0] * cy - s[1] * cx)
        a_eq.append(row)
        c = [1 if e.label == RUNG else 0 for e in self.edges]
        res = lp.linprog(c, a_eq, [0] * len(a_eq), [[1] * n], [1], maximize=True)
        return res.value

    def trace(self, x) -> int:
        """Number of closed curves in the multicurve given by integral weights ``x``."""
        nxt = {}
        for s, (incoming, outgoing) in enumerate(self.stacks):
            ins = [(e, j) for e in incoming for j in range(int(x[e]))]
            outs = [(e, j) for e in outgoing for j in range(int(x[e]))]
            if len(ins) != len(outs):
                raise ValueError(f"weights unbalanced at switch {s}")
            nxt.update(zip(ins, outs))
        seen: set = set()
        count = 0
        for start in nxt:
            if start in seen:
                continue
            count += 1
            cur = start
            while cur not in seen:
                seen.add(cur)
                cur = nxt[cur]
        return count

    def summary(self) -> dict:
        out = {
            "cusp": self.cusp,
            "switches": len(self.switches),
            "triangles": {
                UPWARD: sum(t.kind == UPWARD for t in self.triangles),
                DOWNWARD: sum(t.kind == DOWNWARD for t in self.triangles),
            },
            "edges": {
                LADDERPOLE: sum(e.label == LADDERPOLE for e in self.edges),
                RUNG: sum(e.label == RUNG for e in self.edges),
            },
            "dichotomy": self.dichotomy_ok,
        }
        try:
            bands = self.bands
            self.ladderpoles
        except BandStructureViolated as exc:
            out["bands"] = None
            out["band_error"] = str(exc)
            return out
        out["bands"] = {UPWARD: sum(b.kind == UPWARD for b in bands), DOWNWARD: sum(b.kind == DOWNWARD for b in bands)}
        out["ladderpoles"] = len(self.ladderpoles)
        out["s_plus"] = list(self.s_plus)
        out["s_minus"] = list(self.s_minus)
        out["slope"] = list(self.slope)
        out["carried_cone"] = [list(g) for g in self.carried_cone.generators]
        out["half_plane"] = self.carried_cone.is_half_plane(self.s_plus)
        return out


def build_cusp_track(t: TautTriangulation, cusp: int) -> CuspTrack:
    return CuspTrack(t, cusp)


def classify_edges(ct: CuspTrack) -> dict[int, str]:
    return ct.classify_edges()


def ladderpole_slope(ct: CuspTrack) -> tuple[tuple[int, int], tuple[int, int]]:
    return ct.slope, ct.s_plus


def cusp_carried_cone(ct: CuspTrack) -> CarriedCurveCone:
    return ct.carried_cone
