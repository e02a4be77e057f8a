"""Exact rational linear programming.

A two-phase tableau simplex over ``Fraction`` with Bland's rule, so every
run is deterministic and terminates.  Problems are posed as

    minimize  c.x   subject to   A_eq x = b_eq,  A_ub x <= b_ub,  x >= 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        p = row[c]
        if p != 1:
            row[:] = [x / p for x in row]
            self.rhs[r] /= p
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                other[:] = [x - f * y for x, y in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c

    def reduced_costs(self, cost: Sequence[Fraction]) -> list[Fraction]:
        red = list(cost)
        for row, b in zip(self.rows, self.basis):
            cb = cost[b]
            if cb:
                red = [x - cb * y for x, y in zip(red, row)]
        return red

    def optimize(self, cost: Sequence[Fraction], allowed: int) -> str:
        """Minimize ``cost`` over columns ``< allowed`` entering the basis."""
        while True:
            red = self.reduced_costs(cost)
            enter = next((j for j in range(allowed) if red[j] < 0), None)
            if enter is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], enter)


def linprog(
    c: Sequence,
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    maximize: bool = False,
) -> LPResult:
    n = len(c)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    n_slack = len(a_ub)
    for k, (row, b) in enumerate(zip(a_ub, b_ub)):
        slack = [Fraction(0)] * n_slack
        slack[k] = Fraction(1)
        rows.append([Fraction(x) for x in row] + slack)
        rhs.append(Fraction(b))
    for row, b in zip(a_eq, b_eq):
        rows.append([Fraction(x) for x in row] + [Fraction(0)] * n_slack)
        rhs.append(Fraction(b))
    width = n + n_slack
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    m = len(rows)
    # phase 1: one artificial per row
    for i in range(m):
        rows[i] = rows[i] + [Fraction(int(i == k)) for k in range(m)]
    tab = _Tableau(rows, rhs, [width + i for i in range(m)])
    phase1 = [Fraction(0)] * width + [Fraction(1)] * m
    tab.optimize(phase1, width)
    if sum(tab.rhs[i] for i in range(m) if tab.basis[i] >= width) != 0:
        return LPResult(INFEASIBLE)
    # drive zero-level artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= width:
            col = next((j for j in range(width) if tab.rows[i][j] != 0), None)
            if col is None:
                del tab.rows[i], tab.rhs[i], tab.basis[i]
                continue
            tab.pivot(i, col)
        i += 1
    tab.rows = [row[:width] for row in tab.rows]
    sign = -1 if maximize else 1
    cost = [Fraction(sign) * Fraction(x) for x in c] + [Fraction(0)] * n_slack
    status = tab.optimize(cost, width)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * width
    for b, v in zip(tab.basis, tab.rhs):
        x[b] = v
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, tuple(x[:n]), value)


def feasible_point(a_eq, b_eq, n: int, a_ub=(), b_ub=()) -> tuple[Fraction, ...] | None:
    res = linprog([0] * n, a_eq, b_eq, a_ub, b_ub)
    return res.x if res.status == OPTIMAL else None


def lexmin(a_eq, b_eq, n: int, a_ub=(), b_ub=()) -> tuple[Fraction, ...] | None:
    """The lexicographically smallest point of ``{x >= 0 : A_eq x = b_eq, A_ub x <= b_ub}``.

    Each coordinate is minimized in turn and pinned before the next, which
    makes the answer independent of pivoting history.
    """
    a_eq = [list(r) for r in a_eq]
    b_eq = list(b_eq)
    x = feasible_point(a_eq, b_eq, n, a_ub, b_ub)
    if x is None:
        return None
    for j in range(n):
        obj = [0] * n
        obj[j] = 1
        res = linprog(obj, a_eq, b_eq, a_ub, b_ub)
        if res.status != OPTIMAL:
            return None
        pin = [0] * n
        pin[j] = 1
        a_eq.append(pin)
        b_eq.append(res.value)
        x = res.x
    return x
