"""SVG drawing of a cusp track on a fundamental domain of the cusp torus.

Switches are placed by a periodic barycentric (Tutte) embedding: every
switch sits at the average of its neighbours in the universal cover, with
the lattice given by the peripheral basis.  Positions are exact rationals
until the final formatting step, so the output is byte-stable.
"""
from __future__ import annotations

from fractions import Fraction

from .cusp import LADDERPOLE, UPWARD, BandStructureViolated, CuspTrack
from .linalg import solve

SCALE = 320
MARGIN = 40
UP_FILL = "#f4c27a"
DOWN_FILL = "#ffffff"


def _translations(ct: CuspTrack) -> list[tuple[Fraction, Fraction]]:
    """Deck translation picked up along each torus edge in its canonical direction."""
    cx = ct.complex
    tree = set(cx.spanning_tree)
    out = [(Fraction(0), Fraction(0))] * len(cx.edges)
    for cyc in cx.fundamental_cycles:
        i = cyc[0][0]
        if i in tree:
            continue
        chain = cx.path_chain(cyc, len(cx.edges))
        x, y = cx.homology_class(chain)
        out[i] = (Fraction(x), Fraction(y))
    return out


def layout(ct: CuspTrack) -> tuple[list[tuple[Fraction, Fraction]], list[tuple[Fraction, Fraction]]]:
    """Switch positions in the plane (basis coordinates) and per-edge translations."""
    cx = ct.complex
    n = len(cx.switches)
    tau = _translations(ct)
    # unknowns p_1..p_{n-1}; p_0 is pinned at the origin
    rows = [[Fraction(0)] * (n - 1) for _ in range(n - 1)]
    rhs = [[Fraction(0), Fraction(0)] for _ in range(n - 1)]
    for i, e in enumerate(cx.edges):
        for v, u, sgn in ((e.tail, e.head, 1), (e.head, e.tail, -1)):
            if v == 0:
                continue
            r = v - 1
            rows[r][r] -= 1
            if u:
                rows[r][u - 1] += 1
            rhs[r][0] -= sgn * tau[i][0]
            rhs[r][1] -= sgn * tau[i][1]
    pos = [(Fraction(0), Fraction(0))]
    if n > 1:
        xs = solve(rows, [b[0] for b in rhs])
        ys = solve(rows, [b[1] for b in rhs])
        pos += list(zip(xs, ys))
    return pos, tau


def _disp(pos, tau, cx, i: int, d: int):
    e = cx.edges[i]
    dx = pos[e.head][0] + tau[i][0] - pos[e.tail][0]
    dy = pos[e.head][1] + tau[i][1] - pos[e.tail][1]
    return (d * dx, d * dy)


def _num(x) -> str:
    s = f"{float(x):.2f}"
    return "0.00" if s == "-0.00" else s


def _pt(p, shift) -> tuple[Fraction, Fraction]:
    return (p[0] + shift[0], p[1] + shift[1])


def _screen(p) -> str:
    # y grows upwards in basis coordinates
    return f"{_num(MARGIN + SCALE * p[0])},{_num(MARGIN + SCALE * (1 - p[1]))}"


def render(ct: CuspTrack) -> str:
    cx = ct.complex
    pos, tau = layout(ct)
    try:
        bands_ok = bool(ct.bands)
    except BandStructureViolated:
        bands_ok = False
    span = 2
    shifts = [(Fraction(a), Fraction(b)) for a in range(-span, span + 1) for b in range(-span, span + 1)]
    size = 2 * MARGIN + SCALE

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f"<title>cusp {ct.cusp} track</title>",
        "<defs>",
        f'<clipPath id="domain"><rect x="{MARGIN}" y="{MARGIN}" width="{SCALE}" height="{SCALE}"/></clipPath>',
        "</defs>",
        '<g clip-path="url(#domain)">',
    ]

    for k, tr in enumerate(cx.triangles):
        p0 = pos[tr.corners[0]]
        p1 = _pt(p0, _disp(pos, tau, cx, *tr.sides[0]))
        p2 = _pt(p1, _disp(pos, tau, cx, *tr.sides[1]))
        fill = UP_FILL if ct.triangles[k].kind == UPWARD else DOWN_FILL
        for s in shifts:
            pts = " ".join(_screen(_pt(p, s)) for p in (p0, p1, p2))
            out.append(f'<polygon points="{pts}" fill="{fill}" stroke="none"/>')

    for te in ct.edges:
        a = pos[cx.edges[te.id].tail]
        d = _disp(pos, tau, cx, te.id, 1)
        b = _pt(a, d)
        if te.sign < 0:
            a, b = b, a
            d = (-d[0], -d[1])
        width = 3.5 if te.label == LADDERPOLE else 1.2
        mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        # arrowhead: a small triangle at the midpoint pointing along the edge
        norm = max(abs(d[0]), abs(d[1])) or Fraction(1)
        ux, uy = d[0] / norm / 40, d[1] / norm / 40
        tip = (mid[0] + ux, mid[1] + uy)
        left = (mid[0] - ux - uy / 2, mid[1] - uy + ux / 2)
        right = (mid[0] - ux + uy / 2, mid[1] - uy - ux / 2)
        for s in shifts:
            out.append(
                f'<line x1="{_screen(_pt(a, s)).split(",")[0]}" y1="{_screen(_pt(a, s)).split(",")[1]}" '
                f'x2="{_screen(_pt(b, s)).split(",")[0]}" y2="{_screen(_pt(b, s)).split(",")[1]}" '
                f'stroke="#222" stroke-width="{width}" class="{te.label}"/>'
            )
            pts = " ".join(_screen(_pt(p, s)) for p in (tip, left, right))
            out.append(f'<polygon points="{pts}" fill="#222"/>')

    for i in range(len(cx.switches)):
        for s in shifts:
            x, y = _screen(_pt(pos[i], s)).split(",")
            out.append(f'<circle cx="{x}" cy="{y}" r="3" fill="#000"/>')

    out.append("</g>")
    out.append(
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{SCALE}" height="{SCALE}" fill="none" stroke="#888" stroke-dasharray="4 3"/>'
    )
    if not bands_ok:
        out.append(f'<text x="{MARGIN}" y="{MARGIN - 12}" font-size="12">band structure violated</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(ct: CuspTrack, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render(ct))
