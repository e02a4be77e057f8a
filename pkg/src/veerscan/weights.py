"""Face weights on the branched 2-skeleton and the homology they carry.

A weight vector assigns a number to every face.  At an edge the two
pi-corners split the incident faces into two sides, and a carried surface
passes from one side to the other, so the weights balance:
sum over side 1 = sum over side 2.  That common value ``m(e)`` is the
number of times the surface meets the edge.

Relative second homology is read through duality as Hom(H_1(M), Z).  The
dual graph has a node per tetrahedron and an edge per face oriented along
the coorientation; a weight vector is a 1-cochain on it, the branching
equations are exactly the cocycle conditions around edges, and the class
of ``w`` is its list of values on a basis of dual cycles.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import lp
from .cone import orthant_section_rays
from .cusp import CuspTrack
from .linalg import integer_kernel, left_inverse, matvec, nullspace, primitive, rank, solve
from .triangulation import TautTriangulation


class Infeasible(ValueError):
    pass


def fmt(x) -> str:
    """Exact rational as the string ``p/q`` (or ``p`` for integers)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_matrix(rows) -> list[list[str]]:
    return [[fmt(x) for x in row] for row in rows]


@dataclass(frozen=True)
class BranchingSystem:
    equations: tuple[tuple[int, ...], ...]  # one row per edge class
    basis: tuple[tuple[Fraction, ...], ...]  # of V
    rays: tuple[tuple[int, ...], ...]  # primitive extreme rays of A = V and w >= 0
    chi: tuple[int, ...]  # coefficients of the Euler characteristic functional
    side1: tuple[tuple[int, ...], ...]  # per edge, coefficient of each face in m(e)

    @property
    def n_faces(self) -> int:
        return len(self.chi)

    def in_v(self, w: Sequence) -> bool:
        return all(x == 0 for x in matvec(self.equations, w))

    def in_a(self, w: Sequence) -> bool:
        return self.in_v(w) and all(x >= 0 for x in w)

    def m(self, w: Sequence) -> list[Fraction]:
        return matvec(self.side1, w)

    def chi_of(self, w: Sequence) -> Fraction:
        return sum((Fraction(c) * x for c, x in zip(self.chi, w)), Fraction(0))

    def as_dict(self) -> dict:
        return {
            "equations": fmt_matrix(self.equations),
            "basis": fmt_matrix(self.basis),
            "rays": fmt_matrix(self.rays),
            "chi": [fmt(c) for c in self.chi],
        }


def branching_system(t: TautTriangulation) -> BranchingSystem:
    n_f = len(t.face_classes)
    rows, side1 = [], []
    for e in t.edge_classes:
        s1, s2 = e.sides()
        row = [0] * n_f
        m = [0] * n_f
        for i in s1:
            f = t.face_index[e.face_occurrence(i)]
            row[f] += 1
            m[f] += 1
        for i in s2:
            row[t.face_index[e.face_occurrence(i)]] -= 1
        rows.append(tuple(row))
        side1.append(tuple(m))
    basis = nullspace([list(r) for r in rows], n_f)
    rays = orthant_section_rays(rows, n_f)
    chi = tuple(1 - sum(m[f] for m in side1) for f in range(n_f))
    return BranchingSystem(tuple(rows), tuple(tuple(b) for b in basis), tuple(rays), chi, tuple(side1))


def chi(system: BranchingSystem, w: Sequence) -> Fraction:
    return system.chi_of(w)


def boundary_track_weights(t: TautTriangulation, w: Sequence, ct: CuspTrack) -> list:
    """Weight of each track edge of ``ct``: the weight of the face it lies in."""
    return [w[e.face] for e in ct.edges]


class HomologyModel:
    """H_2(M, dM) for the truncated manifold, with the class map and boundary map."""

    def __init__(self, t: TautTriangulation, tracks: Sequence[CuspTrack] | None = None):
        self.tri = t
        self.system = branching_system(t)
        self.tracks = tuple(tracks) if tracks is not None else tuple(CuspTrack(t, c) for c in range(t.num_cusps))
        n_f = len(t.face_classes)

        # dual graph: face f runs from the tetrahedron it points out of to the one it points into
        self.dual_edges = []
        for fc in t.face_classes:
            a, b = fc.rep, fc.other
            src, dst = (a[0], b[0]) if t.is_out(*a) else (b[0], a[0])
            self.dual_edges.append((src, dst))
        self.tree, self.cycles = self._dual_cycles()

        # loop around each edge as a chain of dual edges
        self.edge_loops = []
        for e in t.edge_classes:
            chain = [0] * n_f
            for i, c in enumerate(e.corners):
                f = t.face_index[(c.tet, c.c)]
                chain[f] += 1 if t.is_out(c.tet, c.c) else -1
            self.edge_loops.append(chain)

        self.nontree = [f for f in range(n_f) if f not in self.tree]
        self.relations = [[loop[f] for f in self.nontree] for loop in self.edge_loops]
        self.lattice = integer_kernel(self.relations, len(self.nontree))
        self.b1 = len(self.lattice)
        self._pinv = left_inverse(self.lattice) if self.lattice else []

    def _dual_cycles(self):
        n = self.tri.tets
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        tree = []
        for f, (a, b) in enumerate(self.dual_edges):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
                tree.append(f)
        adj: dict[int, list] = {i: [] for i in range(n)}
        for f in tree:
            a, b = self.dual_edges[f]
            adj[a].append((b, f, 1))
            adj[b].append((a, f, -1))

        def path(src, dst):
            prev = {src: None}
            queue = [src]
            for node in queue:
                for nb, f, d in adj[node]:
                    if nb not in prev:
                        prev[nb] = (node, f, d)
                        queue.append(nb)
            out = []
            node = dst
            while prev[node] is not None:
                back, f, d = prev[node]
                out.append((f, d))
                node = back
            return out

        cycles = {}
        for f, (a, b) in enumerate(self.dual_edges):
            if f in tree:
                continue
            chain = [0] * len(self.dual_edges)
            chain[f] += 1
            for g, d in path(b, a):
                chain[g] += d
            cycles[f] = chain
        return frozenset(tree), cycles

    # -- class map -----------------------------------------------------------

    def pairing(self, w: Sequence) -> list:
        """Values of the cochain ``w`` on the fundamental dual cycles."""
        return [sum((Fraction(x) * c for x, c in zip(w, self.cycles[f])), Fraction(0)) for f in self.nontree]

    def class_map(self, w: Sequence) -> tuple[Fraction, ...]:
        if not self.lattice:
            return ()
        return tuple(matvec(self._pinv, self.pairing(w)))

    @cached_property
    def l_matrix(self) -> list[list[Fraction]]:
        n_f = self.system.n_faces
        cols = [self.class_map([int(i == j) for i in range(n_f)]) for j in range(n_f)]
        return [[cols[j][k] for j in range(n_f)] for k in range(self.b1)]

    def preimage(self, h: Sequence) -> list[Fraction]:
        """Some ``w`` in V with class ``h``."""
        a = [list(r) for r in self.system.equations] + self.l_matrix
        b = [0] * len(self.system.equations) + list(h)
        w = solve(a, b)
        if w is None:
            raise ValueError(f"class {h} has no preimage")
        return w

    # -- boundary map --------------------------------------------------------

    def boundary_of_weights(self, w: Sequence) -> list[tuple]:
        return [ct.class_of_weights(boundary_track_weights(self.tri, w, ct)) for ct in self.tracks]

    @cached_property
    def d_matrix(self) -> list[list[Fraction]]:
        """Rows: (cusp 0 x, cusp 0 y, cusp 1 x, ...); columns: basis of H_2."""
        cols = []
        for k in range(self.b1):
            w = self.preimage([int(i == k) for i in range(self.b1)])
            cols.append([x for cls in self.boundary_of_weights(w) for x in cls])
        return [[cols[k][r] for k in range(self.b1)] for r in range(2 * len(self.tracks))]

    def boundary(self, h: Sequence) -> list[tuple]:
        flat = matvec(self.d_matrix, h) if self.b1 else [Fraction(0)] * (2 * len(self.tracks))
        return [tuple(flat[2 * i: 2 * i + 2]) for i in range(len(self.tracks))]

    def as_dict(self) -> dict:
        return {
            "b2_punctured": self.b1,
            "L": fmt_matrix(self.l_matrix),
            "boundary": fmt_matrix(self.d_matrix),
        }

    # -- carried classes ------------------------------------------------------

    def feasible_weight_for(self, h: Sequence, a_eq=(), b_eq=(), a_ub=(), b_ub=()) -> tuple[Fraction, ...]:
        """Lexicographically least ``w`` in A with class ``h`` and the extra constraints."""
        n_f = self.system.n_faces
        eq = [list(r) for r in self.system.equations] + self.l_matrix + [list(r) for r in a_eq]
        rhs = [0] * len(self.system.equations) + list(h) + list(b_eq)
        w = lp.lexmin(eq, rhs, n_f, list(a_ub), list(b_ub))
        if w is None:
            raise Infeasible(f"class {[fmt(x) for x in h]} is not carried")
        return w

    def chi_range(self, h: Sequence) -> tuple[Fraction, Fraction]:
        """(min, max) of chi over the weights in A with class ``h``."""
        n_f = self.system.n_faces
        eq = [list(r) for r in self.system.equations] + self.l_matrix
        rhs = [0] * len(self.system.equations) + list(h)
        lo = lp.linprog(self.system.chi, eq, rhs)
        hi = lp.linprog(self.system.chi, eq, rhs, maximize=True)
        if lo.status == lp.INFEASIBLE:
            raise Infeasible(f"class {[fmt(x) for x in h]} is not carried")
        return lo.value, hi.value

    def carried_rays(self) -> list[tuple[int, ...]]:
        return [primitive(self.class_map(r)) for r in self.system.rays]

    def rank_of_image(self) -> int:
        return rank(self.l_matrix) if self.b1 else 0


def class_map(model: HomologyModel, w: Sequence) -> tuple[Fraction, ...]:
    return model.class_map(w)


def feasible_weight_for(model: HomologyModel, h: Sequence, **extra) -> tuple[Fraction, ...]:
    return model.feasible_weight_for(h, **extra)
