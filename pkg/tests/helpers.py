"""Small constructions shared by the tests."""
from itertools import product

from veerscan.triangulation import PI_PAIRS, TautTriangulation, validate_taut


def relabel(t: TautTriangulation, k: int, rho) -> TautTriangulation:
    """Rename vertex v of tetrahedron k to rho[v]."""
    inv = [0] * 4
    for v in range(4):
        inv[rho[v]] = v
    glue = [list(row) for row in t.gluings]
    for s in range(t.tets):
        for f in range(4):
            t2, perm = t.gluings[s][f]
            if s == k:
                new = tuple((rho[perm[inv[u]]] if t2 == k else perm[inv[u]]) for u in range(4))
                glue[k][rho[f]] = (t2, new)
            elif t2 == k:
                glue[s][f] = (t2, tuple(rho[perm[x]] for x in range(4)))
    pis = list(t.pi_pairs)
    (a, b), _ = PI_PAIRS[t.pi_pairs[k]]
    new_pair = {rho[a], rho[b]}
    pis[k] = next(i for i, (p, q) in enumerate(PI_PAIRS) if new_pair in ({*p}, {*q}))
    coor = [list(row) for row in t.coorientations]
    coor[k] = [t.coorientations[k][inv[u]] for u in range(4)]
    return TautTriangulation(
        t.tets, tuple(tuple(r) for r in glue), tuple(pis), tuple(tuple(r) for r in coor)
    )


def taut_variants(t: TautTriangulation):
    """All taut structures on the gluing of ``t`` (every pi assignment, coorientation solved)."""
    out = []
    for pis in product(range(3), repeat=t.tets):
        u = TautTriangulation(t.tets, t.gluings, tuple(pis))
        if not validate_taut(u):
            out.append(u)
    return out
