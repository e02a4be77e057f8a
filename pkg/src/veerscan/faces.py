"""The carried cone in relative second homology and the filling analysis.

Vertex classes are the primitive generators of the extreme rays of the
image of the nonnegative weight cone.  A class is ladderpole at a cusp
when some multiple has a carried representative with no weight on the
rungs of that cusp's track while still meeting it.  The verdict asks that
every cusp sees at most two ladderpole vertex classes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from . import lp
from .cone import conic_membership, extreme_generators, is_salient
from .cusp import RUNG, CuspTrack
from .linalg import integer_kernel, primitive, rank
from .torus import dual_cycle_classes
from .triangulation import TautTriangulation
from .weights import HomologyModel, Infeasible, fmt

EMPTY = "Empty"
LADDERPOLE_NUL = "LadderpoleNulhomologous"
MERIDIANS = "Meridians"
OTHER = "Other"

ONE_CUSP = "OneCusp"
SMALL_BETTI = "SmallBetti"
CUSP_CONDITION = "CuspCondition"

ASSUMPTIONS = (
    "the image of the nonnegative weight cone is taken to be the cone over the fibered face",
    "ladderpole classes are detected up to multiples by linear programming",
)


class NotCarried(ValueError):
    pass


class BoundaryNotMeridional(ValueError):
    pass


class MissingFilling(ValueError):
    pass


class BadFilling(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryType:
    kind: str
    k: int | None = None

    def __str__(self) -> str:
        return f"{self.kind}({self.k})" if self.kind == MERIDIANS else self.kind


@dataclass(frozen=True)
class CarriedCone:
    rays: tuple[tuple[int, ...], ...]
    dimension: int
    salient: bool

    def contains(self, h: Sequence) -> bool:
        return conic_membership(self.rays, h) is not None

    def in_relative_interior(self, h: Sequence) -> bool:
        """True when ``h`` is a combination of all rays with positive coefficients."""
        n = len(self.rays)
        if n == 0:
            return False
        d = len(self.rays[0])
        # lam_j = mu_j + t, maximize t <= 1
        a_eq = [[r[i] for r in self.rays] + [sum(r[i] for r in self.rays)] for i in range(d)]
        res = lp.linprog([0] * n + [1], a_eq, list(h), [[0] * n + [1]], [1], maximize=True)
        return res.status == lp.OPTIMAL and res.value > 0


@dataclass(frozen=True)
class FillingData:
    meridians: tuple[tuple[int, int], ...]  # per cusp, oriented to be positively carried


def decide(incidence: Iterable[tuple[Sequence, int, bool]], n_cusps: int, b2: int | None) -> tuple[bool, list[str]]:
    """Verdict and reasons from the (vertex class, cusp, ladderpole) table alone."""
    counts = [0] * n_cusps
    for _, cusp, flag in incidence:
        if flag:
            counts[cusp] += 1
    verdict = all(c <= 2 for c in counts)
    reasons = []
    if verdict:
        reasons.append(CUSP_CONDITION)
    if n_cusps == 1:
        reasons.append(ONE_CUSP)
    if b2 is not None and b2 <= 3:
        reasons.append(SMALL_BETTI)
    return verdict, reasons


class Analysis:
    """Everything about carried classes for one triangulation."""

    def __init__(self, t: TautTriangulation, tracks: Sequence[CuspTrack] | None = None):
        self.tri = t
        self.model = HomologyModel(t, tracks)
        self.tracks = self.model.tracks
        self.system = self.model.system

    # -- cone -----------------------------------------------------------------

    @cached_property
    def cone(self) -> CarriedCone:
        gens = [g for g in self.model.carried_rays() if any(g)]
        rays = extreme_generators(gens) if is_salient(gens) else sorted(set(gens))
        dim = rank([list(r) for r in rays]) if rays else 0
        return CarriedCone(tuple(rays), dim, is_salient(gens))

    # -- constraints -----------------------------------------------------------

    def _cusp_faces(self, cusp: int) -> list[int]:
        """Multiplicity of each face among the track edges of a cusp."""
        out = [0] * self.system.n_faces
        for e in self.tracks[cusp].edges:
            out[e.face] += 1
        return out

    def _rung_rows(self, cusp: int) -> list[list[int]]:
        faces = sorted({e.face for e in self.tracks[cusp].edges if e.label == RUNG})
        return [[int(f == g) for g in range(self.system.n_faces)] for f in faces]

    def _carried(self, h: Sequence) -> None:
        try:
            self.model.feasible_weight_for(h)
        except Infeasible as exc:
            raise NotCarried(str(exc)) from None

    def _max_cusp_weight(self, h: Sequence, cusp: int, extra_eq: list[list[int]]) -> Fraction | None:
        """Largest weight at the cusp over carried ``w`` with class ``h``, or None if infeasible."""
        sysm, model = self.system, self.model
        a_eq = [list(r) for r in sysm.equations] + model.l_matrix + extra_eq
        b_eq = [0] * len(sysm.equations) + list(h) + [0] * len(extra_eq)
        # bound the objective: the fiber is bounded on veering inputs but stay safe
        total = [1] * sysm.n_faces
        res = lp.linprog(self._cusp_faces(cusp), a_eq, b_eq, maximize=True)
        if res.status == lp.INFEASIBLE:
            return None
        if res.status == lp.UNBOUNDED:
            res = lp.linprog(self._cusp_faces(cusp), a_eq, b_eq, [total], [1], maximize=True)
        return res.value

    def all_ladderpole_weight(self) -> tuple[Fraction, ...] | None:
        """A carried ``w`` with total weight 1 and no rung weight at any cusp, or None."""
        n = self.system.n_faces
        rungs = sorted({e.face for ct in self.tracks for e in ct.edges if e.label == RUNG})
        a_eq = [list(r) for r in self.system.equations]
        a_eq += [[int(f == g) for g in range(n)] for f in rungs]
        a_eq.append([1] * n)
        b_eq = [0] * (len(a_eq) - 1) + [1]
        res = lp.linprog([0] * n, a_eq, b_eq)
        return tuple(res.x) if res.status == lp.OPTIMAL else None

    # -- per class and cusp ----------------------------------------------------

    def is_ladderpole_at(self, v: Sequence, cusp: int) -> bool:
        self._carried(v)
        best = self._max_cusp_weight(v, cusp, self._rung_rows(cusp))
        return best is not None and best > 0

    def boundary_type(self, h: Sequence, cusp: int, fill: FillingData | None = None) -> BoundaryType:
        self._carried(h)
        d = self.model.boundary(h)[cusp]
        if all(x == 0 for x in d):
            if self._max_cusp_weight(h, cusp, []) == 0 or self._zero_at(h, cusp):
                return BoundaryType(EMPTY)
            best = self._max_cusp_weight(h, cusp, self._rung_rows(cusp))
            if best is not None and best > 0:
                return BoundaryType(LADDERPOLE_NUL)
            return BoundaryType(OTHER)
        if fill is None:
            return BoundaryType(OTHER)
        m = fill.meridians[cusp]
        if d[0] * m[1] - d[1] * m[0] != 0:
            return BoundaryType(OTHER)
        k = d[0] / m[0] if m[0] else d[1] / m[1]
        if k <= 0 or Fraction(k).denominator != 1:
            return BoundaryType(OTHER)
        return BoundaryType(MERIDIANS, int(k))

    def _zero_at(self, h: Sequence, cusp: int) -> bool:
        faces = [f for f, c in enumerate(self._cusp_faces(cusp)) if c]
        rows = [[int(f == g) for g in range(self.system.n_faces)] for f in faces]
        return self._max_cusp_weight(h, cusp, rows) is not None

    # -- norms -----------------------------------------------------------------

    def norm_punctured(self, h: Sequence) -> Fraction:
        try:
            w = self.model.feasible_weight_for(h)
        except Infeasible as exc:
            raise NotCarried(str(exc)) from None
        c = self.system.chi_of(w)
        if any(w) and c >= 0:
            raise AssertionError(f"carried class {h} has chi {c} >= 0")
        return -c

    def meridian_count(self, h: Sequence, fill: FillingData) -> int:
        total = 0
        for cusp in range(len(self.tracks)):
            bt = self.boundary_type(h, cusp, fill)
            if bt.kind == OTHER:
                raise BoundaryNotMeridional(f"boundary of {list(h)} at cusp {cusp} is not meridional")
            if bt.kind == MERIDIANS:
                total += bt.k
        return total

    def norm_filled(self, h: Sequence, fill: FillingData) -> Fraction:
        return self.norm_punctured(h) - self.meridian_count(h, fill)

    # -- filling ---------------------------------------------------------------

    def filling_data(self, slopes: Sequence[tuple[int, int]] | None = None) -> FillingData:
        """Orient the given slopes (or the in-file ones) to be positively carried."""
        if slopes is None:
            table = {c: (p, q) for c, p, q in self.tri.fillings}
            missing = [c for c in range(len(self.tracks)) if c not in table]
            if missing:
                raise MissingFilling(f"no filling slope for cusp(s) {missing}")
            slopes = [table[c] for c in range(len(self.tracks))]
        if len(slopes) != len(self.tracks):
            raise MissingFilling(f"expected {len(self.tracks)} filling slopes, got {len(slopes)}")
        out = []
        for c, m in enumerate(slopes):
            m = tuple(int(x) for x in m)
            if primitive(m) != m or m == (0, 0):
                raise BadFilling(f"cusp {c}: slope {m} is not primitive")
            ct = self.tracks[c]
            s = ct.s_plus
            if m[0] * s[1] - m[1] * s[0] == 0:
                raise BadFilling(f"cusp {c}: slope {m} is the ladderpole slope")
            cone = ct.carried_cone
            neg = (-m[0], -m[1])
            if cone.contains(m) and not cone.contains(neg):
                out.append(m)
            elif cone.contains(neg) and not cone.contains(m):
                out.append(neg)
            else:
                raise BadFilling(f"cusp {c}: slope {m} cannot be oriented to be carried")
        return FillingData(tuple(out))

    def meridian_images(self, fill: FillingData) -> list[list[Fraction]]:
        """Each meridian as a class in H_1 of the dual graph (non-tree coordinates)."""
        model = self.model
        out = []
        for c, m in enumerate(fill.meridians):
            cx = self.tracks[c].complex
            cycles = dual_cycle_classes(cx)
            # pick two cycles with independent classes and solve for m over Q
            chosen = None
            for i in range(len(cycles)):
                for j in range(i + 1, len(cycles)):
                    u, v = cycles[i][1], cycles[j][1]
                    if u[0] * v[1] - u[1] * v[0] != 0:
                        chosen = (i, j)
                        break
                if chosen:
                    break
            i, j = chosen
            u, v = cycles[i][1], cycles[j][1]
            det = Fraction(u[0] * v[1] - u[1] * v[0])
            a = (m[0] * v[1] - m[1] * v[0]) / det
            b = (u[0] * m[1] - u[1] * m[0]) / det
            chain = [Fraction(0)] * self.system.n_faces
            for coef, k in ((a, i), (b, j)):
                for _, (t, f) in cycles[k][0]:
                    # dual edges of faces point along the coorientation
                    chain[self.tri.face_index[(t, f)]] += coef * (1 if self.tri.is_out(t, f) else -1)
            out.append([chain[f] for f in model.nontree])
        return out

    def b2_filled(self, fill: FillingData) -> int:
        """b_2 of the closed filled manifold from the dual cell structure.

        H_1 is the cycle space of the dual graph modulo the loops around the
        edges and the meridians; by duality b_2 = b_1.
        """
        rows = [list(r) for r in self.model.relations] + self.meridian_images(fill)
        return len(self.model.nontree) - rank(rows)

    def _meridional_rows(self, fill: FillingData) -> list[list[Fraction]]:
        model = self.model
        rows = []
        for c, m in enumerate(fill.meridians):
            dx, dy = model.d_matrix[2 * c], model.d_matrix[2 * c + 1]
            rows.append([x * m[1] - y * m[0] for x, y in zip(dx, dy)])
        return rows

    def b2_from_boundary(self, fill: FillingData) -> int:
        """dim of classes whose boundary lies in the span of the meridians."""
        return self.model.b1 - (rank(self._meridional_rows(fill)) if self.model.b1 else 0)

    def puncture_lattice(self, fill: FillingData) -> list[tuple[int, ...]]:
        """Integral basis of the classes whose boundary is a multiple of the meridian at every cusp.

        Each basis vector is turned to be carried when one of its signs is.
        """
        if not self.model.b1:
            return []
        rows = []
        for r in self._meridional_rows(fill):
            den = 1
            for x in r:
                den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
            rows.append([int(x * den) for x in r])
        out = []
        for g in integer_kernel(rows, self.model.b1):
            neg = tuple(-x for x in g)
            out.append(neg if not self.cone.contains(g) and self.cone.contains(neg) else tuple(g))
        return out

    # -- report ----------------------------------------------------------------

    def incidence(self) -> list[tuple[tuple[int, ...], int, bool]]:
        return [(v, c, self.is_ladderpole_at(v, c)) for v in self.cone.rays for c in range(len(self.tracks))]

    def report(self, fill: FillingData | None = None) -> "FaceReport":
        inc = self.incidence()
        b2 = self.b2_filled(fill) if fill is not None else None
        verdict, reasons = decide(inc, len(self.tracks), b2)
        queries = list(self.cone.rays)
        if len(self.cone.rays) > 1:
            queries.append(primitive([sum(c) for c in zip(*self.cone.rays)]))
        if fill is not None:
            queries += [g for g in self.puncture_lattice(fill) if self.cone.contains(g) and g not in queries]
        norms = {}
        btypes = []
        for h in queries:
            key = ",".join(str(x) for x in h)
            entry = {"punctured": fmt(self.norm_punctured(h))}
            types = [self.boundary_type(h, c, fill) for c in range(len(self.tracks))]
            btypes.append([list(h), [str(b) for b in types]])
            if fill is not None and all(b.kind != OTHER for b in types):
                k = sum(b.k for b in types if b.kind == MERIDIANS)
                entry["meridians"] = k
                entry["filled"] = fmt(self.norm_punctured(h) - k)
            else:
                entry["meridians"] = None
                entry["filled"] = None
            norms[key] = entry
        return FaceReport(
            rays=tuple(self.cone.rays),
            ladderpole=tuple(inc),
            verdict=verdict,
            reasons=tuple(reasons),
            b2=b2,
            norms=norms,
            boundary_types=btypes,
            meridians=None if fill is None else fill.meridians,
            n_cusps=len(self.tracks),
        )


@dataclass(frozen=True)
class FaceReport:
    rays: tuple[tuple[int, ...], ...]
    ladderpole: tuple[tuple[tuple[int, ...], int, bool], ...]
    verdict: bool
    reasons: tuple[str, ...]
    b2: int | None
    norms: dict = field(compare=False)
    boundary_types: list = field(compare=False)
    meridians: tuple | None = None
    n_cusps: int = 1

    @property
    def ladderpole_counts(self) -> list[int]:
        counts = [0] * self.n_cusps
        for _, c, flag in self.ladderpole:
            counts[c] += flag
        return counts

    def as_dict(self) -> dict:
        return {
            "rays": [list(r) for r in self.rays],
            "ladderpole": [[list(v), c, flag] for v, c, flag in self.ladderpole],
            "verdict": self.verdict,
            "reasons": list(self.reasons),
            "b2": self.b2,
            "norms": self.norms,
            "boundary_types": self.boundary_types,
            "meridians": None if self.meridians is None else [list(m) for m in self.meridians],
            "ladderpole_counts": self.ladderpole_counts,
            "assumptions": list(ASSUMPTIONS),
        }


def carried_cone(t: TautTriangulation) -> CarriedCone:
    return Analysis(t).cone


def main_verdict(t: TautTriangulation, fill: Sequence[tuple[int, int]] | None = None) -> FaceReport:
    a = Analysis(t)
    return a.report(a.filling_data(fill))


def b2_filled(t: TautTriangulation, fill: Sequence[tuple[int, int]] | None = None) -> int:
    a = Analysis(t)
    return a.b2_filled(a.filling_data(fill))
