"""Exact transverse layouts of curve systems on a triangulated surface.

A Layout realizes several normal multicurves simultaneously as an explicit
transverse configuration: every edge carries an ordered list of crossing
points, every triangle an exact straight-chord arrangement over rational
coordinates.  From the arrangement we compute crossings, the complementary
regions with their Euler characteristics and boundary structure, and we
reduce configurations to minimal position by isotoping across empty bigons
(faces with exactly two corners).  By the bigon criterion the crossing
count after reduction is the geometric intersection number.

Regions are computed on the surface cut along the curves, so a region's
Euler characteristic and boundary circles are those of the honest
complementary subsurface (the vertex of the triangulation may lie inside
any region; it is topologically unmarked).
"""
from __future__ import annotations

from fractions import Fraction

from . import words as W


class Token:
    """One edge-crossing point of one circle; identity-based."""
    __slots__ = ("circle", "edge")

    def __init__(self, circle, edge):
        self.circle = circle
        self.edge = edge


class Circle:
    __slots__ = ("owner", "gates", "tokens")

    def __init__(self, owner, gates, tokens):
        self.owner = owner
        self.gates = gates    # list of side ids
        self.tokens = tokens  # parallel list of Token


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _seg_intersection_params(p1, p2, q1, q2):
    """Parameters (t, u) with p1+t(p2-p1) = q1+u(q2-q1), or None if the open
    segments do not cross transversally."""
    d1 = _cross(p1, p2, q1)
    d2 = _cross(p1, p2, q2)
    d3 = _cross(q1, q2, p1)
    d4 = _cross(q1, q2, p2)
    if (d1 > 0) == (d2 > 0) or (d3 > 0) == (d4 > 0):
        return None
    if d1 == 0 or d2 == 0 or d3 == 0 or d4 == 0:
        raise ArithmeticError("degenerate chord contact")
    t = Fraction(d3, d3 - d4)
    u = Fraction(d1, d1 - d2)
    return t, u


_CORNERS = ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
            (Fraction(0), Fraction(1)))


class Region:
    __slots__ = ("cells", "chi", "boundary", "touches_vertex")

    def __init__(self, cells, chi, boundary, touches_vertex):
        self.cells = cells
        self.chi = chi
        # boundary: list of circles, each a list of items:
        #   ('seg', circle_idx, strand, seg_idx, side)  or
        #   ('corner', crossing_id)
        self.boundary = boundary
        self.touches_vertex = touches_vertex

    def corner_count(self):
        return sum(1 for walk in self.boundary for it in walk if it[0] == "corner")

    def boundary_circle_indices(self):
        out = []
        for walk in self.boundary:
            out.append(sorted({it[1] for it in walk if it[0] == "seg"}))
        return out


class Layout:
    """Explicit transverse realization of a list of curve systems.

    ``systems`` is a list; each entry provides the oriented circles of one
    normal multicurve as dicts {'word': gates, 'points': [(edge, pos), ...]}
    with the points giving the curve's own normal nesting order.
    """

    def __init__(self, T, systems):
        self.T = T
        self.circles = []
        self.order = [[] for _ in range(T.n_edges)]
        per_edge = [[] for _ in range(T.n_edges)]
        for owner, comps in enumerate(systems):
            for comp in comps:
                gates = list(comp["word"])
                toks = [Token(None, T.side_edge[s]) for s in gates]
                c = Circle(owner, gates, toks)
                for tok in toks:
                    tok.circle = c
                self.circles.append(c)
                for k, (e, pos) in enumerate(comp["points"]):
                    if e != T.side_edge[gates[k]]:
                        raise ValueError("point/word mismatch")
                    per_edge[e].append((owner, pos, toks[k]))
        for e in range(T.n_edges):
            per_edge[e].sort(key=lambda t: (t[0], t[1]))
            self.order[e] = [t[2] for t in per_edge[e]]
        self._dirty = True
        self._attempt = 0

    # -- derived geometry --------------------------------------------------

    def _positions(self):
        """Map token -> (position index on its edge)."""
        pos = {}
        for e in range(self.T.n_edges):
            for j, tok in enumerate(self.order[e]):
                pos[id(tok)] = j
        return pos

    def _param(self, j, m):
        t = Fraction(j + 1, m + 1)
        if self._attempt:
            t += Fraction(self._attempt * (j + 1) * (j + 1),
                          (m + 2) ** 4 * (1 + self._attempt))
        return t

    def _point_coords(self, side, j, m):
        """Coordinates in the side's triangle chart of the j-th point of the
        edge order (j in edge coordinates)."""
        slot_pos = j if self.T.side_sign[side] > 0 else m - 1 - j
        t = self._param(slot_pos, m)
        k = self.T.slot_of(side)
        a = _CORNERS[k]
        b = _CORNERS[(k + 1) % 3]
        return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))

    def _compute(self):
        if not self._dirty:
            return
        for attempt in range(8):
            self._attempt = attempt
            try:
                self._build_arrangement()
            except ArithmeticError:
                continue
            self._dirty = False
            return
        raise RuntimeError("could not find a generic layout perturbation")

    def _build_arrangement(self):
        T = self.T
        pos = self._positions()
        counts = [len(self.order[e]) for e in range(T.n_edges)]

        # strand chords per triangle: strand k of circle c runs in the
        # triangle entered through partner(gates[k]).
        tri_strands = [[] for _ in range(T.n_tris)]
        for c in self.circles:
            n = len(c.gates)
            for k in range(n):
                s_in = T.partner[c.gates[k]]
                s_out = c.gates[(k + 1) % n]
                t = T.tri_of(s_in)
                e_in, e_out = T.side_edge[s_in], T.side_edge[s_out]
                p = self._point_coords(s_in, pos[id(c.tokens[k])], counts[e_in])
                q = self._point_coords(s_out, pos[id(c.tokens[(k + 1) % n])],
                                       counts[e_out])
                tri_strands[t].append((c, k, p, q))

        # crossings
        crossings = []          # (tri, circleA, kA, tA, circleB, kB, tB, sign, coords)
        strand_crossings = {}   # (id(circle), k) -> list of (t, xid)
        self._xing_pairs = []
        for t in range(T.n_tris):
            st = tri_strands[t]
            for i in range(len(st)):
                c1, k1, p1, p2 = st[i]
                for j in range(i + 1, len(st)):
                    c2, k2, q1, q2 = st[j]
                    if c1 is c2:
                        r = _seg_intersection_params(p1, p2, q1, q2)
                        if r is not None:
                            raise RuntimeError("self-crossing circle in layout")
                        continue
                    r = _seg_intersection_params(p1, p2, q1, q2)
                    if r is None:
                        continue
                    tt, uu = r
                    d1 = (p2[0] - p1[0], p2[1] - p1[1])
                    d2 = (q2[0] - q1[0], q2[1] - q1[1])
                    sg = 1 if d1[0] * d2[1] - d1[1] * d2[0] > 0 else -1
                    xid = len(crossings)
                    coords = (p1[0] + tt * d1[0], p1[1] + tt * d1[1])
                    crossings.append((t, c1, k1, tt, c2, k2, uu, sg, coords))
                    strand_crossings.setdefault((id(c1), k1), []).append((tt, xid))
                    strand_crossings.setdefault((id(c2), k2), []).append((uu, xid))
            # detect coincident crossing points (non-generic): retry
            seen = set()
            for x in crossings:
                if x[0] == t:
                    if x[8] in seen:
                        raise ArithmeticError("coincident crossings")
                    seen.add(x[8])
        for lst in strand_crossings.values():
            lst.sort()
        self._crossings = crossings
        self._strand_crossings = strand_crossings
        self._tri_strands = tri_strands
        self._counts = counts
        self._pos = pos
        self._build_cells()

    # -- planar cells per triangle and glued regions -------------------------

    def _build_cells(self):
        T = self.T
        pos, counts = self._pos, self._counts
        cells = []              # list of dicts
        interval_cells = {}     # (e, j) -> [cell ids]
        segside_cell = {}       # (id(circle), k, i, side) -> cell id
        corner_succ = {}        # directed segside -> directed segside at crossings
        self._segside_cell = segside_cell

        for t in range(T.n_tris):
            nodes = {}
            for k in range(3):
                nodes[("c", k)] = _CORNERS[k]
            edges = []  # (u, v, kind, payload); for 'seg': u->v is strand dir

            for k in range(3):
                side = 3 * t + k
                e = T.side_edge[side]
                m = counts[e]
                # boundary pts along the slot in boundary order
                seq = [("c", k)]
                idxs = range(m) if T.side_sign[side] > 0 else range(m - 1, -1, -1)
                for j in idxs:
                    nid = ("p", e, j)
                    nodes[nid] = self._point_coords(side, j, m)
                    seq.append(nid)
                seq.append(("c", (k + 1) % 3))
                for a in range(len(seq) - 1):
                    # interval id in edge coordinates
                    if T.side_sign[side] > 0:
                        iv = (e, a)
                    else:
                        iv = (e, m - a)
                    edges.append((seq[a], seq[a + 1], "side", iv))

            for (c, k, p, q) in self._tri_strands[t]:
                xs = self._strand_crossings.get((id(c), k), [])
                chain = [("p", T.side_edge[T.partner[c.gates[k]]],
                          pos[id(c.tokens[k])])]
                for (tt, xid) in xs:
                    nid = ("x", xid)
                    nodes[nid] = self._crossings[xid][8]
                    chain.append(nid)
                n = len(c.gates)
                chain.append(("p", T.side_edge[c.gates[(k + 1) % n]],
                              pos[id(c.tokens[(k + 1) % n])]))
                for i in range(len(chain) - 1):
                    edges.append((chain[i], chain[i + 1], "seg", (c, k, i)))

            cells_t = self._trace_faces(t, nodes, edges)
            for walk in cells_t:
                cid = len(cells)
                cell = {"tri": t, "sides": [], "segsides": [],
                        "corner": False, "xcorners": []}
                # walk: list of (u, v, kind, payload, forward?)
                L = len(walk)
                for idx, (u, v, kind, payload, fwd) in enumerate(walk):
                    if kind == "side":
                        cell["sides"].append(payload)
                        interval_cells.setdefault(payload, []).append(cid)
                    else:
                        c, k, i = payload
                        side = "L" if fwd else "R"
                        token = (id(c), k, i, side)
                        cell["segsides"].append(token)
                        segside_cell[token] = cid
                    if u[0] == "c":
                        cell["corner"] = True
                    if u[0] == "x":
                        # corner of the face at a crossing: previous edge ends
                        # at u, current starts at u
                        pu, pv, pk, ppay, pfwd = walk[idx - 1]
                        if pk == "seg" and kind == "seg":
                            cin = (id(ppay[0]), ppay[1], ppay[2],
                                   "L" if pfwd else "R")
                            cout = (id(payload[0]), payload[1], payload[2],
                                    "L" if fwd else "R")
                            cell["xcorners"].append((u[1], cin, cout))
                            corner_succ[cin] = cout
                        else:
                            raise RuntimeError("crossing met a side segment")
                    _ = L
                cells.append(cell)

        # glue across intervals
        parent = list(range(len(cells)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for iv, cs in interval_cells.items():
            if len(cs) != 2:
                raise RuntimeError("interval %s borders %d cells" % (iv, len(cs)))
            union(cs[0], cs[1])

        groups = {}
        for cid in range(len(cells)):
            groups.setdefault(find(cid), []).append(cid)
        groups = dict(sorted(groups.items(), key=lambda kv: min(kv[1])))

        self._cells = cells
        self._corner_succ = corner_succ
        self._interval_region = {}
        self._regions = []
        circle_by_id = {id(c): c for c in self.circles}

        for cids in groups.values():
            F = len(cids)
            intervals = set()
            segsides = []
            touches_v = False
            xcorner_count = 0
            for cid in cids:
                cell = cells[cid]
                intervals.update(cell["sides"])
                segsides.extend(cell["segsides"])
                touches_v = touches_v or cell["corner"]
                xcorner_count += len(cell["xcorners"])
            E = len(intervals) + len(segsides)
            # vertices: v (if touched), one copy per (point, curve side)
            # reached by a segside endpoint, one per crossing-quadrant corner.
            ptcopies = set()
            for (cidc, k, i, side) in segsides:
                c = circle_by_id[cidc]
                xs = self._strand_crossings.get((cidc, k), [])
                if i == 0:
                    ptcopies.add((cidc, k, side))           # entry point copy
                if i == len(xs):
                    n = len(c.gates)
                    ptcopies.add((cidc, (k + 1) % n, side))  # exit point copy
            V = (1 if touches_v else 0) + len(ptcopies) + xcorner_count
            boundary = self._trace_boundary(segsides, circle_by_id)
            reg_id = len(self._regions)
            self._regions.append(Region(cids, V - E + F, boundary, touches_v))
            for iv in intervals:
                self._interval_region[iv] = reg_id

    def _trace_faces(self, t, nodes, edges):
        """Faces of the planar subdivision of triangle t; drops the outer
        face.  Each face is a list of (u, v, kind, payload, forward)."""
        darts = {}
        incident = {}
        for ei, (u, v, kind, payload) in enumerate(edges):
            darts[(ei, 1)] = (u, v)
            darts[(ei, -1)] = (v, u)
            incident.setdefault(u, []).append((ei, 1))
            incident.setdefault(v, []).append((ei, -1))

        def direction(d):
            u, v = darts[d]
            return (nodes[v][0] - nodes[u][0], nodes[v][1] - nodes[u][1])

        def angkey(d):
            dx, dy = direction(d)
            half = 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1
            return (half, dx, dy)

        for u, ds in incident.items():
            # CCW sort: within a half-plane, a before b iff cross(a,b) > 0
            def cmp_sort(lst):
                import functools

                def cc(d1, d2):
                    a, b = direction(d1), direction(d2)
                    h1 = 0 if (a[1] > 0 or (a[1] == 0 and a[0] > 0)) else 1
                    h2 = 0 if (b[1] > 0 or (b[1] == 0 and b[0] > 0)) else 1
                    if h1 != h2:
                        return -1 if h1 < h2 else 1
                    cr = a[0] * b[1] - a[1] * b[0]
                    if cr == 0:
                        raise ArithmeticError("parallel darts at a node")
                    return -1 if cr > 0 else 1
                return sorted(lst, key=functools.cmp_to_key(cc))
            incident[u] = cmp_sort(ds)

        # face successor: at head of dart d, take reversed dart and step CW
        nxt = {}
        for d in darts:
            u, v = darts[d]
            rev = (d[0], -d[1])
            lst = incident[v]
            i = lst.index(rev)
            nxt[d] = lst[(i - 1) % len(lst)]

        faces = []
        seen = set()
        for d0 in sorted(darts):
            if d0 in seen:
                continue
            walk = []
            d = d0
            area2 = Fraction(0)
            while True:
                seen.add(d)
                u, v = darts[d]
                ei, sgn = d
                eu, ev, kind, payload = edges[ei]
                walk.append((u, v, kind, payload, sgn == 1))
                area2 += nodes[u][0] * nodes[v][1] - nodes[v][0] * nodes[u][1]
                d = nxt[d]
                if d == d0:
                    break
            if area2 > 0:
                faces.append(walk)
            elif area2 == 0:
                raise ArithmeticError("zero-area face")
        return faces

    def _trace_boundary(self, segsides, circle_by_id):
        """Boundary circles of a region from its segside tokens."""
        remaining = set(segsides)
        walks = []
        while remaining:
            start = min(remaining)
            walk = []
            cur = start
            while True:
                remaining.discard(cur)
                cidc, k, i, side = cur
                c = circle_by_id[cidc]
                walk.append(("seg", self.circles.index(c), k, i, side))
                xs = self._strand_crossings.get((cidc, k), [])
                n = len(c.gates)
                # where does the traversal end?
                if side == "L":
                    # traversed forward; ends at crossing i (if any) or exit pt
                    if i < len(xs):
                        xid = xs[i][1]
                        nxt = self._corner_succ[cur]
                        walk.append(("corner", xid))
                    else:
                        nxt = (cidc, (k + 1) % n, 0, "L")
                else:
                    # traversed backward; ends at entry pt or crossing i-1
                    if i > 0:
                        xid = xs[i - 1][1]
                        nxt = self._corner_succ[cur]
                        walk.append(("corner", xid))
                    else:
                        km = (k - 1) % n
                        xs_m = self._strand_crossings.get((cidc, km), [])
                        nxt = (cidc, km, len(xs_m), "R")
                cur = nxt
                if cur == start:
                    break
            walks.append(walk)
        return walks

    # -- public queries ------------------------------------------------------

    def regions(self):
        self._compute()
        return self._regions

    def circle_indices_of(self, owner):
        return [i for i, c in enumerate(self.circles) if c.owner == owner]

    def crossings_between(self, o1, o2):
        self._compute()
        n = 0
        for (_, c1, _, _, c2, _, _, _, _) in self._crossings:
            if {c1.owner, c2.owner} == {o1, o2} and (o1 != o2 or c1.owner == o1):
                n += 1
        return n

    def signed_sum(self, o1, o2):
        """Algebraic crossing sum between owners o1 and o2, o1 first."""
        self._compute()
        total = 0
        for (_, c1, _, _, c2, _, _, sg, _) in self._crossings:
            if c1.owner == o1 and c2.owner == o2:
                total += sg
            elif c1.owner == o2 and c2.owner == o1:
                total -= sg
        return total

    def total_crossings(self):
        self._compute()
        return len(self._crossings)

    def readings(self, owner, against):
        """For each circle of `owner`: the cyclic sequence of its crossings
        with owners in `against`, as (other_owner, sign) in traversal order.

        Signs are +1 where the oriented circle crosses the other oriented
        strand positively with respect to the surface orientation.
        """
        self._compute()
        against = set(against)
        out = []
        for ci, c in enumerate(self.circles):
            if c.owner != owner:
                continue
            seq = []
            for k in range(len(c.gates)):
                for (_, xid) in self._strand_crossings.get((id(c), k), []):
                    (_, c1, _, _, c2, _, _, sg, _) = self._crossings[xid]
                    other = c2 if c1 is c else c1
                    if other.owner not in against:
                        continue
                    s = sg if c1 is c else -sg
                    seq.append((other.owner, s, self.circles.index(other)))
            out.append(seq)
        return out

    # -- bigon reduction -----------------------------------------------------

    def _find_bigon(self, scope):
        for reg in self.regions():
            if reg.chi != 1 or len(reg.boundary) != 1:
                continue
            walk = reg.boundary[0]
            corners = [i for i, it in enumerate(walk) if it[0] == "corner"]
            if len(corners) != 2:
                continue
            runs = self._split_runs(walk, corners)
            (ci1, run1), (ci2, run2) = runs
            if ci1 == ci2:
                raise RuntimeError("bigon with both sides on one circle")
            o1 = self.circles[ci1].owner
            o2 = self.circles[ci2].owner
            if scope is not None and frozenset((o1, o2)) not in scope:
                continue
            return reg, runs
        return None

    def _split_runs(self, walk, corners):
        i1, i2 = corners
        run1 = walk[i1 + 1:i2]
        run2 = walk[i2 + 1:] + walk[:i1]
        out = []
        for run in (run1, run2):
            segs = [it for it in run if it[0] == "seg"]
            if not segs:
                raise RuntimeError("empty bigon side")
            cis = {it[1] for it in segs}
            if len(cis) != 1:
                raise RuntimeError("mixed bigon side")
            out.append((segs[0][1], segs))
        return out

    def reduce(self, scope=None):
        """Remove empty bigons until none is left within scope.

        scope: None for all pairs, else a set of frozensets of owner indices.
        Returns the number of bigons removed.
        """
        if scope is not None:
            scope = {frozenset(p) for p in scope}
        n = 0
        while True:
            self._compute()
            found = self._find_bigon(scope)
            if found is None:
                return n
            reg, runs = found
            self._do_r2(reg, runs)
            n += 1

    def _run_crossing_indices(self, ci, run):
        """Edge-crossing word indices passed along a boundary run, in the
        direction of the run, plus the run's direction (+1 forward)."""
        c = self.circles[ci]
        n = len(c.gates)
        side = run[0][4]
        strands = [it[2] for it in run]
        if side == "L":
            ks = [(strands[0] + 1 + i) % n for i in range(len(strands) - 1)]
            return ks, 1
        ks = [(strands[0] - i) % n for i in range(len(strands) - 1)]
        return ks, -1

    def _do_r2(self, reg, runs):
        (ciA, runA), (ciB, runB) = runs
        # reroute the circle whose run comes second in the walk; by symmetry
        # either works, pick B = larger circle index for determinism
        if ciB < ciA:
            ciA, runA, ciB, runB = ciB, runB, ciA, runA
        A = self.circles[ciA]
        B = self.circles[ciB]
        T = self.T
        nA, nB = len(A.gates), len(B.gates)

        ksA, dirA = self._run_crossing_indices(ciA, runA)
        ksB, dirB = self._run_crossing_indices(ciB, runB)

        # replacement gates for B, travelling in B's own direction along the
        # bigon: B's run in the walk runs opposite to A's run around the
        # region boundary, so B's travel X->Y matches A's run direction
        # reversed.  Build A's gate/point path in B's travel direction.
        if runB[0][4] == "L":
            # walk parallel to B's orientation; B travels run order, which is
            # opposite to A's run order along the boundary circle
            a_path = list(reversed(ksA))
            a_forward = dirA < 0
        else:
            a_path = list(ksA)
            a_forward = dirA > 0
        # B's deleted crossings in B's own orientation
        if runB[0][4] == "L":
            del_ks = ksB
        else:
            del_ks = list(reversed(ksB))

        new_gates = []
        anchor_tokens = []
        for k in a_path:
            if a_forward:
                new_gates.append(A.gates[k])
            else:
                new_gates.append(T.partner[A.gates[k]])
            anchor_tokens.append(A.tokens[k])

        # bigon side of each anchor point: the side interval adjacent to the
        # anchor token lying in the bigon region
        self._compute()
        reg_id = self._regions.index(reg)
        inserts = []
        for tok in anchor_tokens:
            e = tok.edge
            j = self.order[e].index(tok)
            before = self._interval_region.get((e, j))
            after = self._interval_region.get((e, j + 1))
            if before == reg_id and after != reg_id:
                inserts.append((tok, +1))   # bigon before: insert after
            elif after == reg_id and before != reg_id:
                inserts.append((tok, 0))    # bigon after: insert before
            else:
                raise RuntimeError("cannot locate bigon side at anchor")

        # splice B: delete tokens/gates at del_ks, insert the new path at the
        # start of the deleted block
        del_set = set(del_ks)
        if len(del_set) != len(del_ks):
            raise RuntimeError("bigon arc wraps the whole circle")
        if del_ks:
            anchor = del_ks[0]
        else:
            # B's arc stays inside one triangle: the path is inserted on the
            # strand carrying the arc, between its two delimiting crossings
            anchor = (runB[0][2] + 1) % nB
        new_tokens = []
        for (tok, off), g in zip(inserts, new_gates):
            e = self.T.side_edge[g]
            if e != tok.edge:
                raise RuntimeError("anchor/gate mismatch")
            nt = Token(B, e)
            j = self.order[e].index(tok)
            self.order[e].insert(j + off, nt)
            new_tokens.append(nt)

        gates2, tokens2 = [], []
        # rebuild B's cyclic word starting at the deleted block
        orderly = [(anchor + i) % nB for i in range(nB)]
        for k in orderly:
            if k in del_set:
                continue
            gates2.append(B.gates[k])
            tokens2.append(B.tokens[k])
        # remove deleted tokens from edge orders
        for k in del_ks:
            tok = B.tokens[k]
            self.order[tok.edge].remove(tok)
        # the new path replaces the deleted block; it starts where the block
        # started
        B.gates = new_gates + gates2
        B.tokens = new_tokens + tokens2
        if not B.gates:
            raise RuntimeError("reduction emptied a circle")
        self._dirty = True

    def reduce_foldbacks(self):
        """Remove foldback strands (exit through the entry slot) from a fully
        disjoint layout; afterwards every circle word is reduced and the
        configuration is the joint normal position.

        Only innermost foldbacks (adjacent points on their edge) are removed,
        which keeps the configuration embedded; an innermost one always
        exists while any foldback remains.
        """
        if self.total_crossings() != 0:
            raise RuntimeError("foldback reduction requires a disjoint layout")
        while True:
            fold = None
            stuck = False
            for c in self.circles:
                n = len(c.gates)
                for k in range(n):
                    nxt = (k + 1) % n
                    if c.gates[nxt] != self.T.partner[c.gates[k]]:
                        continue
                    t1, t2 = c.tokens[k], c.tokens[nxt]
                    lst = self.order[t1.edge]
                    i1 = lst.index(t1)
                    i2 = lst.index(t2)
                    if abs(i1 - i2) == 1:
                        fold = (c, k, nxt)
                        break
                    stuck = True
                if fold:
                    break
            if fold is None:
                if stuck:
                    raise RuntimeError("foldback present but none innermost")
                return
            c, k, nxt = fold
            if len(c.gates) == 2:
                raise RuntimeError("circle reduced to a null-homotopic loop")
            for idx in sorted((k, nxt), reverse=True):
                tok = c.tokens[idx]
                self.order[tok.edge].remove(tok)
                del c.gates[idx]
                del c.tokens[idx]
            self._dirty = True

    # -- convenience ---------------------------------------------------------

    def euler_check(self):
        self._compute()
        total = sum(r.chi for r in self._regions)
        return total == 2 - 2 * self.T.genus
