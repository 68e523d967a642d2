"""Combinatorial model of the closed oriented genus-g surface.

The surface is carried by a fixed one-vertex triangulation ("std-g<g>"),
built from the 4g-gon with boundary word a1 b1 a1' b1' ... ag bg ag' bg'.
Each handle block of four polygon sides is triangulated the same way, and
the blocks are joined along a fan of spine diagonals, so curves supported
in a sub-range of handles can be transported between genera by local
rewriting (see curves.transport_*).

Triangles are stored as triples of *side slots*.  Side slot 3*t+k is the
k-th boundary side of triangle t, listed in the positive (counterclockwise)
cyclic order; the two slots carrying an edge traverse it in opposite
directions, which is what makes the global orientation consistent.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class Triangulation:
    """One-vertex triangulation of the closed oriented surface of genus g.

    Invariants (checked on construction):
      - 6g-3 edges, 4g-2 triangles, every edge on exactly two side slots;
      - the two slots of an edge traverse it in opposite directions;
      - the corner rotation around the vertex is a single cycle, i.e. the
        complex has exactly one vertex.
    """

    def __init__(self, genus, triangles, edge_names, label):
        # triangles: list of 3-tuples of (edge, sign) with sign +1 if the
        # side traverses the edge in its canonical direction.
        self.genus = genus
        self.label = label
        self.n_tris = len(triangles)
        self.n_edges = len(edge_names)
        self.edge_names = tuple(edge_names)
        self.side_edge = []
        self.side_sign = []
        for tri in triangles:
            for edge, sign in tri:
                self.side_edge.append(edge)
                self.side_sign.append(sign)
        self.side_edge = tuple(self.side_edge)
        self.side_sign = tuple(self.side_sign)

        if self.n_tris != 4 * genus - 2 or self.n_edges != 6 * genus - 3:
            raise ValueError("edge/triangle counts do not match genus %d" % genus)

        sides_of = [[] for _ in range(self.n_edges)]
        for s, e in enumerate(self.side_edge):
            sides_of[e].append(s)
        for e, ss in enumerate(sides_of):
            if len(ss) != 2:
                raise ValueError("edge %d lies on %d sides" % (e, len(ss)))
            if self.side_sign[ss[0]] + self.side_sign[ss[1]] != 0:
                raise ValueError("edge %d traversed twice in the same direction" % e)
        # edge_sides[e] = (positive side, negative side)
        self.edge_sides = tuple(
            (ss[0], ss[1]) if self.side_sign[ss[0]] > 0 else (ss[1], ss[0])
            for ss in sides_of
        )
        partner = [0] * (3 * self.n_tris)
        for a, b in self.edge_sides:
            partner[a], partner[b] = b, a
        self.partner = tuple(partner)

        self.rotation = self._corner_rotation()
        if len(self.rotation) != 3 * self.n_tris:
            raise ValueError("complex has more than one vertex")
        # position of each edge end in the rotation: crossing step i passes
        # the start-end of side gate(corner i).
        self._end_pos = {}
        for i, (t, k) in enumerate(self.rotation):
            s = 3 * t + k
            e = self.side_edge[s]
            end = 0 if self.side_sign[s] > 0 else 1  # tail end if positive
            key = (e, end)
            if key in self._end_pos:
                raise ValueError("edge end visited twice around the vertex")
            self._end_pos[key] = i

    # -- side helpers ------------------------------------------------------

    def tri_of(self, side):
        return side // 3

    def slot_of(self, side):
        return side % 3

    def sides_of_tri(self, t):
        return (3 * t, 3 * t + 1, 3 * t + 2)

    def _corner_rotation(self):
        """Corners (t, k) in cyclic order around the single vertex.

        Corner (t, k) sits at the start of side slot k of triangle t; the
        step to the next corner crosses that side near its start.
        """
        start = (0, 0)
        out = [start]
        cur = start
        seen = {start}
        while True:
            t, k = cur
            p = self.partner[3 * t + k]
            nxt = (p // 3, (p % 3 + 1) % 3)
            if nxt == start:
                break
            if nxt in seen:
                raise ValueError("corner rotation is not a cycle")
            seen.add(nxt)
            out.append(nxt)
            cur = nxt
        return tuple(out)

    def rotation_gates(self):
        """Gate (= exited side slot) for each step of the corner rotation."""
        return tuple(3 * t + k for t, k in self.rotation)

    def end_position(self, edge, end):
        """Rotation step index at which the given edge end is crossed (end 0
        is the tail of the canonical direction, end 1 the head)."""
        return self._end_pos[(edge, end)]

    def euler_characteristic(self):
        return 1 - self.n_edges + self.n_tris

    def edge_index(self, name):
        return self.edge_names.index(name)

    def __repr__(self):
        return "Triangulation(%s)" % self.label

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self.label == other.label \
            and self.side_edge == other.side_edge and self.side_sign == other.side_sign

    def __hash__(self):
        return hash((self.label, self.side_edge, self.side_sign))


def _chain_triangles(g):
    """Triangle table of the standard chain triangulation of genus g >= 2.

    Edge order: per handle block i (1-based): a_i, b_i, f_i, g_i at indices
    4(i-1)..4(i-1)+3; then interior closers e_2..e_{g-1}; then spine
    diagonals E_1..E_{g-1}.
    """
    names = []
    for i in range(1, g + 1):
        names += ["a%d" % i, "b%d" % i, "f%d" % i, "g%d" % i]
    for i in range(2, g):
        names.append("e%d" % i)
    for i in range(1, g):
        names.append("E%d" % i)
    idx = {n: k for k, n in enumerate(names)}

    def closer(i):
        # (edge, sign of the direction V_{4i-4} -> V_{4i})
        if i == 1:
            return idx["E1"], 1
        if i == g:
            return idx["E%d" % (g - 1)], -1
        return idx["e%d" % i], 1

    tris = []
    for i in range(1, g + 1):
        a, b, f, gg = (idx["a%d" % i], idx["b%d" % i],
                       idx["f%d" % i], idx["g%d" % i])
        ce, cs = closer(i)
        tris.append(((a, 1), (b, 1), (f, -1)))
        tris.append(((f, 1), (a, -1), (gg, -1)))
        tris.append(((gg, 1), (b, -1), (ce, -cs)))
    for j in range(2, g):
        tris.append(((idx["E%d" % (j - 1)], 1), (idx["e%d" % j], 1),
                     (idx["E%d" % j], -1)))
    return tris, names


@lru_cache(maxsize=None)
def standard_triangulation(g):
    """The standard one-vertex triangulation of the closed genus-g surface.

    Deterministic: repeated calls return the identical (cached) object.
    Rejects g = 0, where no essential curves exist.
    """
    if g < 1:
        raise ValueError("genus must be >= 1 (got %d)" % g)
    if g == 1:
        tris = [((0, 1), (1, 1), (2, -1)),
                ((2, 1), (0, -1), (1, -1))]
        return Triangulation(1, tris, ["a1", "b1", "f1"], "std-g1")
    tris, names = _chain_triangles(g)
    return Triangulation(g, tris, names, "std-g%d" % g)


# -- homology ---------------------------------------------------------------

@dataclass(frozen=True)
class HomologyClass:
    """Element of H_1 of the genus-g surface in the basis a1,b1,...,ag,bg."""
    genus: int
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 2 * self.genus:
            raise ValueError("expected %d coordinates" % (2 * self.genus))

    def __add__(self, other):
        self._same(other)
        return HomologyClass(self.genus,
                             tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __neg__(self):
        return HomologyClass(self.genus, tuple(-x for x in self.coords))

    def scale(self, n):
        return HomologyClass(self.genus, tuple(n * x for x in self.coords))

    def is_zero(self):
        return all(x == 0 for x in self.coords)

    def _same(self, other):
        if self.genus != other.genus:
            raise ValueError("homology classes live on different surfaces")


def symplectic_form(T):
    """Matrix of the intersection form in the standard basis: 2x2 blocks
    [[0,1],[-1,0]], one per handle."""
    g = T.genus
    J = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        J[2 * i][2 * i + 1] = 1
        J[2 * i + 1][2 * i] = -1
    return J


def algebraic_intersection(h1, h2):
    """Signed intersection number h1^T J h2; bilinear and antisymmetric."""
    h1._same(h2)
    g = h1.genus
    total = 0
    for i in range(g):
        total += h1.coords[2 * i] * h2.coords[2 * i + 1]
        total -= h1.coords[2 * i + 1] * h2.coords[2 * i]
    return total
