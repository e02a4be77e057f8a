"""Taut ideal triangulations: the ``.vtri`` format, validation and indexing.

Tetrahedron vertices are labelled 0..3 and face ``f`` is the face opposite
vertex ``f``.  A gluing of face ``f`` of tetrahedron ``t`` is a target
tetrahedron and a permutation ``perm`` with ``perm[i]`` the image of vertex
``i``; it carries face ``f`` onto face ``perm[f]``.

Each tetrahedron carries one pair of opposite edges labelled pi (the other
two pairs are labelled 0) and a coorientation on its faces, recorded as
``True`` when the face points out of the tetrahedron.
"""
from __future__ import annotations

import dataclasses
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable

PI_PAIRS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
PI_NAMES = ("01-23", "02-13", "03-12")
TET_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
IDENTITY = (0, 1, 2, 3)


def perm_sign(p: Iterable[int]) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def invert(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def other_vertices(*used: int) -> tuple[int, ...]:
    return tuple(v for v in range(4) if v not in used)


# --------------------------------------------------------------------- errors


class VtriError(ValueError):
    """A ``.vtri`` input that cannot be turned into a triangulation."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        loc = f"line {line}: " if line is not None else ""
        super().__init__(f"{loc}{message}")
        self.line = line
        self.field = field


class EmptyInput(VtriError):
    pass


class MalformedLine(VtriError):
    pass


class MalformedPermutation(VtriError):
    pass


class SelfGluingIdentity(VtriError):
    pass


class SelfGluing(VtriError):
    pass


class DanglingTetrahedron(VtriError):
    pass


class MissingGluing(VtriError):
    pass


class GluingInvolutionError(VtriError):
    pass


class MissingAngleRecord(VtriError):
    pass


class NonTorusCusp(ValueError):
    """A cusp link that is not a torus."""


class Inconsistent(ValueError):
    """The angle data admit no coorientation; ``witness`` is a cycle of constraints."""

    def __init__(self, message: str, witness: list[tuple]):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------- structures


@dataclass(frozen=True)
class Corner:
    """Edge ``{a, b}`` of ``tet``; the walk around the edge leaves through face ``c``."""

    tet: int
    a: int
    b: int
    c: int
    d: int


@dataclass(frozen=True)
class EdgeClass:
    id: int
    corners: tuple[Corner, ...]
    pi_positions: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.corners)

    def face_occurrence(self, i: int) -> tuple[int, int]:
        """The (tet, face) crossed going from corner ``i`` to corner ``i + 1``."""
        c = self.corners[i]
        return c.tet, c.c

    def sides(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Face-occurrence indices on the two sides cut out by the pi-corners."""
        if len(self.pi_positions) != 2:
            raise ValueError(f"edge {self.id} has {len(self.pi_positions)} pi-corners")
        p, q = self.pi_positions
        n = self.degree
        return tuple(range(p, q)), tuple(i % n for i in range(q, p + n))

    def corner_sides(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """0-corner indices strictly between the pi-corners, side by side."""
        p, q = self.pi_positions
        n = self.degree
        return tuple(range(p + 1, q)), tuple(i % n for i in range(q + 1, p + n))


@dataclass(frozen=True)
class FaceClass:
    id: int
    rep: tuple[int, int]
    other: tuple[int, int]
    perm: tuple[int, ...]  # vertex labels of ``rep`` -> labels of ``other``


@dataclass(frozen=True)
class Violation:
    invariant: str
    cell: str
    detail: str = ""

    def as_dict(self) -> dict:
        return {"invariant": self.invariant, "cell": self.cell, "detail": self.detail}


@dataclass(frozen=True)
class TautTriangulation:
    tets: int
    gluings: tuple[tuple[tuple[int, tuple[int, ...]], ...], ...]
    pi_pairs: tuple[int, ...]
    coorientation: tuple[tuple[bool, ...], ...] | None = None
    fillings: tuple[tuple[int, int, int], ...] = ()
    orientation: tuple[int, ...] | None = field(default=None, compare=False)

    # -- basic access -------------------------------------------------------

    def glue(self, t: int, f: int) -> tuple[int, int, tuple[int, ...]]:
        t2, perm = self.gluings[t][f]
        return t2, perm[f], perm

    def is_pi(self, t: int, a: int, b: int) -> bool:
        e = (min(a, b), max(a, b))
        return e in PI_PAIRS[self.pi_pairs[t]]

    def pi_partner(self, t: int, v: int) -> int:
        for pair in PI_PAIRS[self.pi_pairs[t]]:
            if v in pair:
                return pair[1] if pair[0] == v else pair[0]
        raise AssertionError

    @cached_property
    def orientation_signs(self) -> tuple[int, ...] | None:
        """Per-tetrahedron signs making all gluings orientation-reversing, or None."""
        if self.orientation is not None:
            return self.orientation
        signs: list[int | None] = [None] * self.tets
        for root in range(self.tets):
            if signs[root] is not None:
                continue
            signs[root] = 1
            queue = deque([root])
            while queue:
                t = queue.popleft()
                for f in range(4):
                    t2, _, perm = self.glue(t, f)
                    want = -signs[t] * perm_sign(perm)
                    if signs[t2] is None:
                        signs[t2] = want
                        queue.append(t2)
                    elif signs[t2] != want:
                        return None
        return tuple(signs)

    @property
    def is_orientable(self) -> bool:
        return self.orientation_signs is not None

    def reversed(self) -> "TautTriangulation":
        """The same triangulation with the opposite global orientation."""
        signs = self.orientation_signs
        if signs is None:
            raise ValueError("triangulation is not orientable")
        return dataclasses.replace(self, orientation=tuple(-s for s in signs))

    def flipped(self) -> "TautTriangulation":
        """The same triangulation with every face coorientation reversed."""
        coor = self.coorientations
        return dataclasses.replace(
            self, coorientation=tuple(tuple(not x for x in row) for row in coor)
        )

    # -- faces --------------------------------------------------------------

    @cached_property
    def face_classes(self) -> tuple[FaceClass, ...]:
        seen = set()
        out = []
        for t in range(self.tets):
            for f in range(4):
                if (t, f) in seen:
                    continue
                t2, f2, perm = self.glue(t, f)
                seen.add((t, f))
                seen.add((t2, f2))
                out.append(FaceClass(len(out), (t, f), (t2, f2), perm))
        return tuple(out)

    @cached_property
    def face_index(self) -> dict[tuple[int, int], int]:
        idx = {}
        for fc in self.face_classes:
            idx[fc.rep] = fc.id
            idx[fc.other] = fc.id
        return idx

    def to_face_rep(self, t: int, f: int, v: int) -> int:
        """Translate vertex ``v`` of face ``(t, f)`` into the labels of the face's rep."""
        fc = self.face_classes[self.face_index[(t, f)]]
        if fc.rep == (t, f):
            return v
        return invert(fc.perm)[v]

    # -- edges --------------------------------------------------------------

    @cached_property
    def _edge_data(self):
        classes: list[EdgeClass] = []
        where: dict[tuple[int, int, int], tuple[int, int]] = {}
        problems: list[Violation] = []
        for t in range(self.tets):
            for a, b in TET_EDGES:
                if (t, a, b) in where:
                    continue
                c, d = other_vertices(a, b)
                start = Corner(t, a, b, c, d)
                corners = []
                cur = start
                eid = len(classes)
                while True:
                    key = (cur.tet, min(cur.a, cur.b), max(cur.a, cur.b))
                    if key in where:
                        problems.append(
                            Violation("EdgeSelfReversed", f"edge {eid}", "edge identified with itself reversed")
                        )
                        break
                    where[key] = (eid, len(corners))
                    corners.append(cur)
                    t2, _, perm = self.glue(cur.tet, cur.c)
                    cur = Corner(t2, perm[cur.a], perm[cur.b], perm[cur.d], perm[cur.c])
                    if cur == start:
                        break
                pis = tuple(i for i, k in enumerate(corners) if self.is_pi(k.tet, k.a, k.b))
                classes.append(EdgeClass(eid, tuple(corners), pis))
        return tuple(classes), where, problems

    @property
    def edge_classes(self) -> tuple[EdgeClass, ...]:
        return self._edge_data[0]

    def edge_at(self, t: int, a: int, b: int) -> tuple[int, int]:
        """(edge class id, corner index) of edge ``{a, b}`` of tetrahedron ``t``."""
        return self._edge_data[1][(t, min(a, b), max(a, b))]

    def edge_end(self, t: int, v: int, x: int) -> tuple[int, int]:
        """The end (edge id, 0 or 1) of edge ``{v, x}`` of ``t`` lying at vertex ``v``."""
        eid, k = self.edge_at(t, v, x)
        corner = self.edge_classes[eid].corners[k]
        return eid, 0 if corner.a == v else 1

    # -- cusps --------------------------------------------------------------

    @cached_property
    def cusp_index(self) -> dict[tuple[int, int], int]:
        parent = {(t, v): (t, v) for t in range(self.tets) for v in range(4)}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t in range(self.tets):
            for f in range(4):
                t2, _, perm = self.glue(t, f)
                for v in other_vertices(f):
                    ra, rb = find((t, v)), find((t2, perm[v]))
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
        roots = sorted({find(x) for x in parent})
        label = {r: i for i, r in enumerate(roots)}
        return {x: label[find(x)] for x in parent}

    @property
    def num_cusps(self) -> int:
        return len(set(self.cusp_index.values()))

    def cusp_vertices(self, cusp: int) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(x for x, c in self.cusp_index.items() if c == cusp))

    # -- coorientation -------------------------------------------------------

    @cached_property
    def coorientations(self) -> tuple[tuple[bool, ...], ...]:
        """Supplied coorientations, or the solved ones (raises Inconsistent)."""
        if self.coorientation is not None:
            return self.coorientation
        return solve_coorientations(self)

    def is_out(self, t: int, f: int) -> bool:
        return self.coorientations[t][f]

    def face_orientation(self, t: int, f: int) -> tuple[int, int, int]:
        """Cyclic vertex order of face ``(t, f)`` orienting it so that
        (face orientation, coorientation) is positive in the manifold."""
        signs = self.orientation_signs
        p, q, r = other_vertices(f)
        s = signs[t] * (-1) ** f * (1 if self.is_out(t, f) else -1)
        return (p, q, r) if s > 0 else (p, r, q)

    def __str__(self) -> str:
        return serialize(self)


def _face_constraints(t: TautTriangulation):
    """(u, v, differ) parity constraints on per-face out/in variables."""
    cons = []
    for tet in range(t.tets):
        (a, b), (c, d) = PI_PAIRS[t.pi_pairs[tet]]
        # faces opposite c, d contain pi-edge ab; faces opposite a, b contain cd
        cons.append(((tet, c), (tet, d), False, f"tet {tet} pi-edge {a}{b}"))
        cons.append(((tet, a), (tet, b), False, f"tet {tet} pi-edge {c}{d}"))
        cons.append(((tet, a), (tet, c), True, f"tet {tet} 0-edge {b}{d}"))
    for tet in range(t.tets):
        for f in range(4):
            t2, f2, _ = t.glue(tet, f)
            if (tet, f) < (t2, f2):
                cons.append(((tet, f), (t2, f2), True, f"glued face {tet}.{f}~{t2}.{f2}"))
    return cons


def solve_coorientations(t: TautTriangulation) -> tuple[tuple[bool, ...], ...]:
    """Solve the coorientation parity constraints from the angle data.

    The global flip is fixed by making face 0 of tetrahedron 0 point out
    (and likewise the least face of every further connected component).
    """
    adj: dict[tuple[int, int], list] = {(a, f): [] for a in range(t.tets) for f in range(4)}
    for u, v, differ, why in _face_constraints(t):
        adj[u].append((v, differ, why))
        adj[v].append((u, differ, why))
    value: dict[tuple[int, int], bool] = {}
    parent: dict[tuple[int, int], tuple] = {}
    for root in sorted(adj):
        if root in value:
            continue
        value[root] = True
        parent[root] = None
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, differ, why in adj[u]:
                want = value[u] != differ
                if v not in value:
                    value[v] = want
                    parent[v] = (u, why)
                    queue.append(v)
                elif value[v] != want:
                    raise Inconsistent(
                        f"no consistent coorientation ({why})", _witness(parent, u, v, why)
                    )
    return tuple(tuple(value[(a, f)] for f in range(4)) for a in range(t.tets))


def _witness(parent, u, v, why) -> list[tuple]:
    def chain(x):
        out = []
        while parent[x] is not None:
            p, w = parent[x]
            out.append((p, x, w))
            x = p
        return out

    cu, cv = chain(u), chain(v)
    cycle = cu[::-1] + [(u, v, why)] + [(b, a, w) for a, b, w in cv]
    return [(a, b, w) for a, b, w in cycle]


# ---------------------------------------------------------------- validation


def validate_taut(t: TautTriangulation) -> list[Violation]:
    """Every violated taut-triangulation invariant, each naming its cell."""
    out: list[Violation] = []
    for tet in range(t.tets):
        for f in range(4):
            t2, f2, perm = t.glue(tet, f)
            back_t, back_perm = t.gluings[t2][f2]
            if back_t != tet or back_perm != invert(perm):
                out.append(Violation("GluingInvolution", f"face {tet}.{f}"))
    if out:
        return out
    if not t.is_orientable:
        out.append(Violation("Orientability", "triangulation", "some gluing preserves orientation"))
    seen = {0}
    stack = [0]
    while stack:
        a = stack.pop()
        for f in range(4):
            b = t.gluings[a][f][0]
            if b not in seen:
                seen.add(b)
                stack.append(b)
    if len(seen) != t.tets:
        out.append(Violation("Connectivity", "triangulation"))
    for tet in range(t.tets):
        for v in range(4):
            n_pi = sum(t.is_pi(tet, v, x) for x in other_vertices(v))
            if n_pi != 1:
                out.append(Violation("VertexAngleSum", f"tet {tet} vertex {v}", f"{n_pi} pi-labels"))
    out.extend(t._edge_data[2])
    for e in t.edge_classes:
        n_pi = len(e.pi_positions)
        if n_pi != 2:
            out.append(
                Violation("EdgeAngleSum", f"edge {e.id}", f"angle sum {n_pi}*pi over degree {e.degree}")
            )
    if t.coorientation is None:
        try:
            solve_coorientations(t)
        except Inconsistent as exc:
            out.append(Violation("CoorientationInconsistent", "triangulation", str(exc)))
        return out
    coor = t.coorientation
    for tet in range(t.tets):
        n_out = sum(coor[tet])
        if n_out != 2:
            out.append(Violation("TwoOutTwoIn", f"tet {tet}", f"{n_out} faces out"))
        (a, b), (c, d) = PI_PAIRS[t.pi_pairs[tet]]
        if coor[tet][c] != coor[tet][d]:
            out.append(Violation("PiEdgeCoorientation", f"tet {tet} edge {a}{b}"))
        if coor[tet][a] != coor[tet][b]:
            out.append(Violation("PiEdgeCoorientation", f"tet {tet} edge {c}{d}"))
    for tet in range(t.tets):
        for f in range(4):
            t2, f2, _ = t.glue(tet, f)
            if (tet, f) <= (t2, f2) and coor[tet][f] == coor[t2][f2]:
                out.append(Violation("GluedCoorientation", f"face {tet}.{f}~{t2}.{f2}"))
    return out


def is_taut(t: TautTriangulation) -> bool:
    return not validate_taut(t)


# -------------------------------------------------------------------- format

_GLUE = re.compile(r"^glue\s+(\S+)\s+(\S+)\s+->\s+(\S+)\s+(\S+)\s+perm\s+(\S+)$")


def _int(tok: str, line: int, name: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise MalformedLine(f"{name} is not an integer: {tok!r}", line, name) from None


def parse(text: str | bytes) -> TautTriangulation:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            records.append((lineno, body))
    if not records:
        raise EmptyInput("empty input")
    lineno, first = records[0]
    parts = first.split()
    if len(parts) != 2 or parts[0] != "tets":
        raise MalformedLine("first record must be 'tets N'", lineno, "tets")
    n = _int(parts[1], lineno, "tets")
    if n <= 0:
        raise MalformedLine("tetrahedron count must be positive", lineno, "tets")

    glue: dict[tuple[int, int], tuple[int, tuple[int, ...], int]] = {}
    pis: dict[int, int] = {}
    coors: dict[int, tuple[bool, ...]] = {}
    fills: dict[int, tuple[int, int]] = {}
    order = {"glue": 0, "pi": 1, "coor": 2, "fill": 3}
    stage = 0

    def tet_index(tok, line, name):
        k = _int(tok, line, name)
        if not 0 <= k < n:
            raise DanglingTetrahedron(f"tetrahedron {k} out of range", line, name)
        return k

    for lineno, body in records[1:]:
        kw = body.split()[0]
        if kw not in order:
            raise MalformedLine(f"unknown record {kw!r}", lineno, "record")
        if order[kw] < stage:
            raise MalformedLine(f"{kw!r} record out of order", lineno, "record")
        stage = order[kw]
        if kw == "glue":
            m = _GLUE.match(body)
            if not m:
                raise MalformedLine("expected 'glue t f -> t2 f2 perm abcd'", lineno, "glue")
            t1 = tet_index(m.group(1), lineno, "t")
            f1 = _int(m.group(2), lineno, "f")
            t2 = tet_index(m.group(3), lineno, "t2")
            f2 = _int(m.group(4), lineno, "f2")
            if not (0 <= f1 < 4 and 0 <= f2 < 4):
                raise MalformedLine("face index must be in 0..3", lineno, "f")
            ptxt = m.group(5)
            if len(ptxt) != 4 or sorted(ptxt) != list("0123"):
                raise MalformedPermutation(f"{ptxt!r} is not a permutation of 0123", lineno, "perm")
            perm = tuple(int(ch) for ch in ptxt)
            if perm[f1] != f2:
                raise MalformedPermutation(f"perm {ptxt} does not carry face {f1} to {f2}", lineno, "perm")
            if (t1, f1) == (t2, f2):
                if perm == IDENTITY:
                    raise SelfGluingIdentity("face glued to itself by the identity", lineno, "perm")
                raise SelfGluing("face glued to itself", lineno, "perm")
            if (t1, f1) in glue:
                raise MalformedLine(f"duplicate gluing for face {t1}.{f1}", lineno, "glue")
            glue[(t1, f1)] = (t2, perm, lineno)
        elif kw == "pi":
            parts = body.split()
            if len(parts) != 3 or parts[2] not in PI_NAMES:
                raise MalformedLine("expected 'pi t P' with P in 01-23, 02-13, 03-12", lineno, "pi")
            t1 = tet_index(parts[1], lineno, "t")
            if t1 in pis:
                raise MalformedLine(f"duplicate angle record for tet {t1}", lineno, "pi")
            pis[t1] = PI_NAMES.index(parts[2])
        elif kw == "coor":
            parts = body.split()
            if len(parts) != 6 or any(s not in "+-" or len(s) != 1 for s in parts[2:]):
                raise MalformedLine("expected 'coor t s0 s1 s2 s3' with s in {+,-}", lineno, "coor")
            t1 = tet_index(parts[1], lineno, "t")
            if t1 in coors:
                raise MalformedLine(f"duplicate coorientation record for tet {t1}", lineno, "coor")
            coors[t1] = tuple(s == "+" for s in parts[2:])
        else:
            parts = body.split()
            if len(parts) != 4:
                raise MalformedLine("expected 'fill c p q'", lineno, "fill")
            c, p, q = (_int(x, lineno, "fill") for x in parts[1:])
            if c < 0:
                raise MalformedLine("cusp index must be nonnegative", lineno, "fill")
            if gcd(p, q) != 1:
                raise MalformedLine(f"filling slope ({p},{q}) is not primitive", lineno, "fill")
            if c in fills:
                raise MalformedLine(f"duplicate filling for cusp {c}", lineno, "fill")
            fills[c] = (p, q)

    last = records[-1][0]
    for t1 in range(n):
        for f1 in range(4):
            if (t1, f1) not in glue:
                raise MissingGluing(f"no gluing record for face {t1}.{f1}", last, "glue")
    for (t1, f1), (t2, perm, lineno) in glue.items():
        back_t, back_perm, _ = glue[(t2, perm[f1])]
        if back_t != t1 or back_perm != invert(perm):
            raise GluingInvolutionError(
                f"reverse record for face {t2}.{perm[f1]} does not undo face {t1}.{f1}", lineno, "glue"
            )
    for t1 in range(n):
        if t1 not in pis:
            raise MissingAngleRecord(f"no angle record for tet {t1}", last, "pi")
    if coors and len(coors) != n:
        missing = min(set(range(n)) - set(coors))
        raise MalformedLine(f"coorientation records must cover every tet (missing {missing})", last, "coor")
    gl = tuple(tuple((glue[(t1, f1)][0], glue[(t1, f1)][1]) for f1 in range(4)) for t1 in range(n))
    return TautTriangulation(
        tets=n,
        gluings=gl,
        pi_pairs=tuple(pis[t1] for t1 in range(n)),
        coorientation=tuple(coors[t1] for t1 in range(n)) if coors else None,
        fillings=tuple((c, p, q) for c, (p, q) in sorted(fills.items())),
    )


def serialize(t: TautTriangulation) -> str:
    lines = [f"tets {t.tets}"]
    for t1 in range(t.tets):
        for f1 in range(4):
            t2, perm = t.gluings[t1][f1]
            lines.append(f"glue {t1} {f1} -> {t2} {perm[f1]} perm {''.join(map(str, perm))}")
    for t1 in range(t.tets):
        lines.append(f"pi {t1} {PI_NAMES[t.pi_pairs[t1]]}")
    if t.coorientation is not None:
        for t1 in range(t.tets):
            lines.append(f"coor {t1} " + " ".join("+" if s else "-" for s in t.coorientation[t1]))
    for c, p, q in t.fillings:
        lines.append(f"fill {c} {p} {q}")
    return "\n".join(lines) + "\n"


def load(path) -> TautTriangulation:
    with open(path, "rb") as fh:
        return parse(fh.read())


def from_gluing_data(data, pi_pairs, coorientation=None, fillings=()) -> TautTriangulation:
    """Build from ``[(neighbors, perms), ...]`` per tetrahedron."""
    gl = tuple(
        tuple((int(nbrs[f]), tuple(int(x) for x in perms[f])) for f in range(4)) for nbrs, perms in data
    )
    return TautTriangulation(len(gl), gl, tuple(pi_pairs), coorientation, tuple(fillings))
