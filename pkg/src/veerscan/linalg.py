"""Exact linear algebra over the rationals and the integers.

Matrices are plain lists of rows; entries are ``int`` or ``Fraction``.
Nothing here ever touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = list
Matrix = list


def frac_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence) -> Vector:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def rref(a: Matrix, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [list(map(Fraction, row)) for row in a]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(a: Matrix) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int) -> list[Vector]:
    """Basis of ``{x : a x = 0}``, one vector per free column, in column order."""
    if not a:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, pivots = rref(a, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(r, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence) -> Vector | None:
    """One solution of ``a x = b`` (free variables set to zero), or None."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(a, b)]
    r, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(r, pivots):
        x[pc] = row[n]
    return x


def in_span(vectors: Sequence[Sequence], v: Sequence) -> bool:
    if not vectors:
        return all(x == 0 for x in v)
    return solve(transpose([list(u) for u in vectors]), v) is not None


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integral vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def integer_kernel(a: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """A Z-basis of the saturated lattice ``{x in Z^n : a x = 0}``.

    Unimodular column operations bring ``a`` to column echelon form; the
    matching columns of the accumulated transform span the kernel.  The
    result is returned in row Hermite normal form so it is canonical.
    """
    m = [[int(x) for x in row] for row in a]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # columns are basis

    def colop(i: int, j: int, p: int, q: int, r: int, s: int) -> None:
        # (col_i, col_j) <- (p col_i + q col_j, r col_i + s col_j)
        for mat in (m, u):
            for row in mat:
                x, y = row[i], row[j]
                row[i], row[j] = p * x + q * y, r * x + s * y

    lead = 0
    for row_idx in range(len(m)):
        if lead >= ncols:
            break
        for j in range(lead + 1, ncols):
            x, y = m[row_idx][lead], m[row_idx][j]
            if y == 0:
                continue
            g, p, q = _ext_gcd(x, y)
            colop(lead, j, p, q, -y // g, x // g)
        if m[row_idx][lead] != 0:
            lead += 1
    basis = [tuple(u[i][j] for i in range(ncols)) for j in range(lead, ncols)]
    return hermite_rows(basis)


def hermite_rows(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row Hermite normal form of an integer lattice basis (zero rows dropped)."""
    h = [list(map(int, r)) for r in rows]
    if not h:
        return []
    n = len(h[0])
    r = 0
    for c in range(n):
        # gcd-combine everything in column c into row r
        for i in range(r + 1, len(h)):
            if h[i][c] == 0:
                continue
            if h[r][c] == 0:
                h[r], h[i] = h[i], h[r]
                continue
            g, p, q = _ext_gcd(h[r][c], h[i][c])
            a, b = h[r][c] // g, h[i][c] // g
            ri, ii = h[r], h[i]
            h[r] = [p * x + q * y for x, y in zip(ri, ii)]
            h[i] = [-b * x + a * y for x, y in zip(ri, ii)]
        if r < len(h) and h[r][c] != 0:
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
            for i in range(r):
                f = h[i][c] // h[r][c]
                if f:
                    h[i] = [x - f * y for x, y in zip(h[i], h[r])]
            r += 1
            if r == len(h):
                break
    return [tuple(row) for row in h[:r]]


def left_inverse(columns: Sequence[Sequence]) -> Matrix:
    """A matrix ``P`` with ``P @ B = I`` for ``B`` having the given independent columns."""
    b = transpose([list(map(Fraction, c)) for c in columns])
    k = len(columns)
    # (B^T B)^{-1} B^T is exact and does not depend on a row choice
    bt = transpose(b)
    gram = matmul(bt, b)
    inv = inverse(gram)
    assert len(inv) == k
    return matmul(inv, bt)


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    r, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(r) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r]


def det2(u: Sequence, v: Sequence):
    return u[0] * v[1] - u[1] * v[0]
