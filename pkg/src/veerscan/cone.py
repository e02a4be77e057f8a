"""Rational polyhedral cones: extreme rays and membership.

Extreme rays of ``{x >= 0 : A x = 0}`` come from the double description
method, adding one equation at a time to the nonnegative orthant and
combining only adjacent ray pairs (combinatorial adjacency test).  Conic
hulls of explicit generators are reduced with exact LP.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import lp
from .linalg import dot, primitive, rank


def _zero_set(r: Sequence[int]) -> frozenset[int]:
    return frozenset(i for i, x in enumerate(r) if x == 0)


def orthant_section_rays(a_eq: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Primitive integral extreme rays of ``{x in R^n : x >= 0, A x = 0}``, sorted."""
    rays: list[tuple[int, ...]] = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    for row in a_eq:
        row = [Fraction(x) for x in row]
        if all(x == 0 for x in row):
            continue
        vals = [dot(row, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        neg = [r for r, v in zip(rays, vals) if v < 0]
        new = [r for r, v in zip(rays, vals) if v == 0]
        zs = {r: _zero_set(r) for r in rays}
        vmap = dict(zip(rays, vals))
        for p in pos:
            for q in neg:
                common = zs[p] & zs[q]
                if any(common <= zs[r] for r in rays if r != p and r != q):
                    continue
                comb = [vmap[p] * y - vmap[q] * x for x, y in zip(p, q)]
                new.append(primitive(comb))
        rays = sorted(set(new))
    return sorted(rays)


def conic_membership(gens: Sequence[Sequence], v: Sequence) -> tuple[Fraction, ...] | None:
    """Nonnegative coefficients expressing ``v`` in ``cone(gens)``, or None."""
    d = len(v)
    if not gens:
        return () if all(x == 0 for x in v) else None
    a_eq = [[g[i] for g in gens] for i in range(d)]
    return lp.feasible_point(a_eq, list(v), len(gens))


def is_salient(gens: Sequence[Sequence]) -> bool:
    """True when ``cone(gens)`` contains no line."""
    gens = [g for g in gens if any(x != 0 for x in g)]
    if not gens:
        return True
    d = len(gens[0])
    a_eq = [[g[i] for g in gens] for i in range(d)] + [[1] * len(gens)]
    b_eq = [0] * d + [1]
    return lp.feasible_point(a_eq, b_eq, len(gens)) is None


def extreme_generators(gens: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Irredundant primitive generators of a salient cone, lexicographically sorted."""
    prims = sorted({primitive(g) for g in gens if any(x != 0 for x in g)})
    keep = []
    for i, g in enumerate(prims):
        others = prims[:i] + prims[i + 1:]
        if conic_membership(others, g) is None:
            keep.append(g)
    return sorted(keep)


def dimension(gens: Sequence[Sequence]) -> int:
    return rank([list(g) for g in gens]) if gens else 0
