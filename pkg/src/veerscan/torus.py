"""The cell complex of a cusp torus and its integral first homology.

Every (tetrahedron, ideal vertex) pair contributes a link triangle; its
vertices are the ends of the tetrahedron edges at that ideal vertex and
its sides are the arcs cut out of the three faces through the vertex.
The torus is oriented as seen from inside the truncated manifold, i.e.
with normal pointing away from the cusp.

Homology classes are computed with intersection numbers.  For a closed
edge path ``b`` the push-off of ``b`` to its left is a dual curve, and
``i(a, b)`` is a sum of local crossing signs read off the cyclic order of
half-edges around each vertex.  This gives, for each basis curve, a
linear functional on 1-chains, so the class of any cycle is two dot
products.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .linalg import hermite_rows
from .triangulation import NonTorusCusp, TautTriangulation, other_vertices, perm_sign


@dataclass(frozen=True)
class TorusEdge:
    key: tuple[int, int, int]  # (tet, face, vertex) of the face's rep
    face: int  # face class id
    tail: int  # switch index, canonical orientation
    head: int


@dataclass(frozen=True)
class LinkTriangle:
    tet: int
    vertex: int
    ccw: tuple[int, int, int]  # other tetrahedron vertices in counterclockwise order
    corners: tuple[int, int, int]  # switch index at each entry of ``ccw``
    sides: tuple[tuple[int, int], ...]  # (edge index, +1/-1) for ccw sides ccw[k] -> ccw[k+1]


class CuspComplex:
    """Vertices (switches), edges and triangles of one cusp torus."""

    def __init__(self, tri: TautTriangulation, cusp: int):
        self.tri = tri
        self.cusp = cusp
        self.vertices_tv = tri.cusp_vertices(cusp)
        ends = set()
        for t, v in self.vertices_tv:
            for x in other_vertices(v):
                ends.add(tri.edge_end(t, v, x))
        self.switches: tuple[tuple[int, int], ...] = tuple(sorted(ends))
        self.switch_index = {s: i for i, s in enumerate(self.switches)}

        keys = set()
        for t, v in self.vertices_tv:
            for f in other_vertices(v):
                keys.add(self._edge_key(t, f, v))
        edges = []
        for key in sorted(keys):
            t0, f0, v0 = key
            a0, b0 = other_vertices(f0, v0)
            edges.append(
                TorusEdge(key, tri.face_index[(t0, f0)], self.link_vertex(t0, v0, a0), self.link_vertex(t0, v0, b0))
            )
        self.edges: tuple[TorusEdge, ...] = tuple(edges)
        self.edge_index = {e.key: i for i, e in enumerate(edges)}

        self._check_torus()
        self.triangles: tuple[LinkTriangle, ...] = tuple(self._triangle(t, v) for t, v in self.vertices_tv)
        self.triangle_index = {(tr.tet, tr.vertex): i for i, tr in enumerate(self.triangles)}

    # -- labels ---------------------------------------------------------------

    def _edge_key(self, t: int, f: int, v: int) -> tuple[int, int, int]:
        fc = self.tri.face_classes[self.tri.face_index[(t, f)]]
        t0, f0 = fc.rep
        return t0, f0, self.tri.to_face_rep(t, f, v)

    def link_vertex(self, t: int, v: int, x: int) -> int:
        return self.switch_index[self.tri.edge_end(t, v, x)]

    def side(self, t: int, v: int, x: int, y: int) -> tuple[int, int]:
        """Edge index of the side from link vertex x to y of triangle (t, v), and
        +1 when that direction is the edge's canonical orientation."""
        (f,) = other_vertices(v, x, y)
        key = self._edge_key(t, f, v)
        a0 = other_vertices(key[1], key[2])[0]
        return self.edge_index[key], 1 if self.tri.to_face_rep(t, f, x) == a0 else -1

    def _triangle(self, t: int, v: int) -> LinkTriangle:
        x, y, z = other_vertices(v)
        # viewed from inside the manifold: the normal points away from v
        sgn = self.tri.orientation_signs[t] * perm_sign((v, x, y, z))
        ccw = (x, y, z) if sgn > 0 else (x, z, y)
        sides = tuple(self.side(t, v, ccw[k], ccw[(k + 1) % 3]) for k in range(3))
        return LinkTriangle(t, v, ccw, tuple(self.link_vertex(t, v, w) for w in ccw), sides)

    def _check_torus(self) -> None:
        n_v, n_e, n_f = len(self.switches), len(self.edges), len(self.vertices_tv)
        chi = n_v - n_e + n_f
        if chi != 0:
            raise NonTorusCusp(f"cusp {self.cusp} link has Euler characteristic {chi}")
        # orientability by propagating a triangle orientation across sides
        orient: dict[tuple[int, int], int] = {}
        tv = self.vertices_tv
        start = tv[0]
        orient[start] = 1
        stack = [start]
        while stack:
            t, v = stack.pop()
            for f in other_vertices(v):
                t2, _, perm = self.tri.glue(t, f)
                # link orientation (vertex order v,x,y,z) is carried by perm restricted to the face
                want = orient[(t, v)] * -perm_sign(perm)
                nb = (t2, perm[v])
                if nb not in orient:
                    orient[nb] = want
                    stack.append(nb)
                elif orient[nb] != want:
                    raise NonTorusCusp(f"cusp {self.cusp} link is non-orientable")

    # -- chains -----------------------------------------------------------------

    def boundary_of_triangle(self, k: int) -> list[int]:
        chain = [0] * len(self.edges)
        for e, s in self.triangles[k].sides:
            chain[e] += s
        return chain

    def chain_boundary(self, chain) -> list:
        out = [0] * len(self.switches)
        for e, c in enumerate(chain):
            if c:
                out[self.edges[e].head] += c
                out[self.edges[e].tail] -= c
        return out

    @cached_property
    def ccw_next(self) -> dict[tuple[int, int], tuple[int, int]]:
        """Half-edge (edge, end) -> next half-edge counterclockwise around its vertex."""
        nxt = {}
        for tr in self.triangles:
            for k in range(3):
                e_out, s_out = tr.sides[k]  # ccw[k] -> ccw[k+1]
                e_in, s_in = tr.sides[(k - 1) % 3]  # ccw[k-1] -> ccw[k]
                h1 = (e_out, 0 if s_out > 0 else 1)
                h2 = (e_in, 1 if s_in > 0 else 0)
                if h1 in nxt:
                    raise NonTorusCusp(f"cusp {self.cusp}: half-edge {h1} repeated")
                nxt[h1] = h2
        return nxt

    def half_edges_at(self, switch: int) -> list[tuple[int, int]]:
        """Half-edges around a switch in counterclockwise order."""
        start = None
        for e, te in enumerate(self.edges):
            if te.tail == switch:
                start = (e, 0)
                break
            if te.head == switch:
                start = (e, 1)
                break
        out = [start]
        h = self.ccw_next[start]
        while h != start:
            out.append(h)
            h = self.ccw_next[h]
        return out

    def pushoff_functional(self, path: list[tuple[int, int]]) -> list[int]:
        """``P`` with ``i(a, b) = a . P`` for every 1-cycle ``a``; ``path`` is the closed
        edge path ``b`` as (edge, direction) steps."""
        p = [0] * len(self.edges)
        n = len(path)
        for k in range(n):
            e_in, d_in = path[k]
            e_out, d_out = path[(k + 1) % n]
            h_in = (e_in, 1 if d_in > 0 else 0)
            h_out = (e_out, 0 if d_out > 0 else 1)
            h = self.ccw_next[h_out]
            guard = 0
            while h != h_in:
                # an edge leaving b on its left crosses the push-off from right to left
                p[h[0]] += -1 if h[1] == 0 else 1
                h = self.ccw_next[h]
                guard += 1
                if guard > 4 * len(self.edges):
                    raise ValueError("path is not closed at a vertex")
        return p

    # -- peripheral basis ----------------------------------------------------

    @cached_property
    def spanning_tree(self) -> tuple[int, ...]:
        parent = list(range(len(self.switches)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        tree = []
        for i, e in enumerate(self.edges):  # edges are sorted by key
            a, b = find(e.tail), find(e.head)
            if a != b:
                parent[max(a, b)] = min(a, b)
                tree.append(i)
        return tuple(tree)

    def tree_path(self, src: int, dst: int) -> list[tuple[int, int]]:
        adj: dict[int, list] = {i: [] for i in range(len(self.switches))}
        for i in self.spanning_tree:
            e = self.edges[i]
            adj[e.tail].append((e.head, i, 1))
            adj[e.head].append((e.tail, i, -1))
        prev = {src: None}
        queue = [src]
        for node in queue:
            for nb, i, d in adj[node]:
                if nb not in prev:
                    prev[nb] = (node, i, d)
                    queue.append(nb)
        out = []
        node = dst
        while prev[node] is not None:
            back, i, d = prev[node]
            out.append((i, d))
            node = back
        return out[::-1]

    @cached_property
    def fundamental_cycles(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        tree = set(self.spanning_tree)
        cycles = []
        for i, e in enumerate(self.edges):
            if i in tree:
                continue
            cycles.append(tuple([(i, 1)] + self.tree_path(e.head, e.tail)))
        return tuple(cycles)

    @staticmethod
    def path_chain(path, n_edges: int) -> list[int]:
        chain = [0] * n_edges
        for e, d in path:
            chain[e] += d
        return chain

    def intersection(self, chain_a, path_b) -> int:
        return sum(x * y for x, y in zip(chain_a, self.pushoff_functional(list(path_b))))

    @cached_property
    def basis(self):
        """(chain, functional) for the two peripheral basis curves, with i(b1, b2) = +1.

        The first lexicographic pair of fundamental cycles meeting once is
        used; the general case falls back to a Hermite-reduced lattice basis.
        """
        n_e = len(self.edges)
        cycles = self.fundamental_cycles
        chains = [self.path_chain(c, n_e) for c in cycles]
        funcs = [self.pushoff_functional(list(c)) for c in cycles]

        def i(j, k):
            return sum(x * y for x, y in zip(chains[j], funcs[k]))

        first_nonzero = None
        for j in range(len(cycles)):
            for k in range(j + 1, len(cycles)):
                ijk = i(j, k)
                if ijk and first_nonzero is None:
                    first_nonzero = (j, k, ijk)
                if abs(ijk) == 1:
                    if ijk < 0:
                        return (chains[j], funcs[j]), ([-x for x in chains[k]], [-x for x in funcs[k]]), (j, k)
                    return (chains[j], funcs[j]), (chains[k], funcs[k]), (j, k)
        if first_nonzero is None:
            raise NonTorusCusp(f"cusp {self.cusp}: fundamental cycles have no intersections")
        j, k, d = first_nonzero
        # coordinates of every cycle relative to (c_j, c_k), then a lattice basis
        coords = [(Fraction(i(m, k), d), Fraction(i(j, m), d)) for m in range(len(cycles))]
        den = 1
        for x, y in coords:
            den = den * x.denominator * y.denominator
        lat = hermite_rows([(int(x * den), int(y * den)) for x, y in coords])
        u1, u2 = [tuple(Fraction(c, den) for c in row) for row in lat]
        if u1[0] * u2[1] - u1[1] * u2[0] < 0:
            u2 = tuple(-c for c in u2)

        def combo(u):
            ch = [u[0] * a + u[1] * b for a, b in zip(chains[j], chains[k])]
            fn = [u[0] * a + u[1] * b for a, b in zip(funcs[j], funcs[k])]
            return ch, fn

        return combo(u1), combo(u2), None

    def homology_class(self, chain) -> tuple:
        """Coordinates of a 1-cycle in the peripheral basis."""
        (c1, p1), (c2, p2), _ = self.basis
        x = sum(a * b for a, b in zip(chain, p2))
        y = -sum(a * b for a, b in zip(chain, p1))
        return (x, y)

    def intersection_number(self, u, v):
        """Algebraic intersection of two classes given in peripheral coordinates."""
        return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class CuspClass:
    id: int
    vertices: tuple[tuple[int, int], ...]
    complex: CuspComplex
    basis: tuple[tuple, tuple]  # the two basis 1-cycles as edge chains

    def class_of(self, chain) -> tuple:
        return self.complex.homology_class(chain)


def cusp_classes(tri: TautTriangulation) -> tuple[CuspClass, ...]:
    out = []
    for c in range(tri.num_cusps):
        cx = CuspComplex(tri, c)
        (c1, _), (c2, _), _ = cx.basis
        out.append(CuspClass(c, cx.vertices_tv, cx, (tuple(c1), tuple(c2))))
    return tuple(out)


def dual_cycle_classes(cx: CuspComplex):
    """Fundamental cycles of the dual graph of a cusp torus with their classes.

    Nodes are link triangles and a dual step crosses one torus edge.  Each
    cycle is a list of steps ``(edge index, (tet, face) being exited)``,
    returned together with its class in the peripheral basis.
    """
    n = len(cx.triangles)
    left_of: dict[int, tuple[int, tuple[int, int]]] = {}
    right_of: dict[int, tuple[int, tuple[int, int]]] = {}
    for k, tr in enumerate(cx.triangles):
        for j, (e, s) in enumerate(tr.sides):
            (f,) = other_vertices(tr.vertex, tr.ccw[j], tr.ccw[(j + 1) % 3])
            (left_of if s > 0 else right_of)[e] = (k, (tr.tet, f))
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    for e in range(len(cx.edges)):
        a, b = find(left_of[e][0]), find(right_of[e][0])
        if a != b:
            parent[max(a, b)] = min(a, b)
            tree.append(e)
    adj: dict[int, list] = {k: [] for k in range(n)}
    for e in tree:
        adj[left_of[e][0]].append((right_of[e][0], e, 1))
        adj[right_of[e][0]].append((left_of[e][0], e, -1))

    def path(src, dst):
        prev = {src: None}
        queue = [src]
        for node in queue:
            for nb, e, d in adj[node]:
                if nb not in prev:
                    prev[nb] = (node, e, d)
                    queue.append(nb)
        out = []
        node = dst
        while prev[node] is not None:
            back, e, d = prev[node]
            out.append((e, d))
            node = back
        return out[::-1]

    (c1, _), (c2, _), _ = cx.basis
    tree_set = set(tree)
    out = []
    for e in range(len(cx.edges)):
        if e in tree_set:
            continue
        moves = [(e, 1)] + path(right_of[e][0], left_of[e][0])
        # crossing an edge from its left to its right counts +1
        cross = [0] * len(cx.edges)
        steps = []
        for k, d in moves:
            cross[k] += d
            steps.append((k, left_of[k][1] if d > 0 else right_of[k][1]))
        i1 = sum(x * y for x, y in zip(cross, c1))
        i2 = sum(x * y for x, y in zip(cross, c2))
        out.append((steps, (i2, -i1)))
    return out
