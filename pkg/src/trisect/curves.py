"""Isotopy classes of curves as normal coordinates, and exact operations.

A multicurve is stored by its edge-weight vector on the standard
triangulation; the weights determine the curve by tracing the nested corner
arcs.  Equality of weight vectors is equality of normal forms.  Geometric
intersection numbers, isotopy tests across the vertex, twists and band sums
all go through explicit layouts (see layout.Layout) or gate-word surgery,
and every constructed curve is re-validated by tracing its reduced word.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import words as W
from .layout import Layout
from .surface import HomologyClass, standard_triangulation


class NormalMultiCurve:
    """Essential multicurve on a triangulation, as normal coordinates."""

    def __init__(self, tri, weights, _components=None):
        self.tri = tri
        self.weights = tuple(weights)
        if _components is None:
            comps = W.trace(tri, self.weights)
            if not comps:
                raise ValueError("empty multicurve")
            for c in comps:
                if W.is_vertex_link(tri, c["weights"]):
                    raise ValueError("null-homotopic (vertex-linking) component")
            _components = [_orient(tri, c) for c in comps]
        self._components = _components

    @property
    def n_components(self):
        return len(self._components)

    def components(self):
        """Split into simple closed curves; weights of the parts sum to the
        whole."""
        out = []
        for c in self._components:
            out.append(SimpleClosedCurve(self.tri, c["weights"], _components=[c]))
        return out

    def component_data(self):
        return self._components

    def total_weight(self):
        return sum(self.weights)

    def __eq__(self, other):
        return (isinstance(other, NormalMultiCurve)
                and self.tri == other.tri and self.weights == other.weights)

    def __hash__(self):
        return hash((self.tri.label, self.weights))

    def __repr__(self):
        return "%s(%s, w=%s)" % (type(self).__name__, self.tri.label,
                                 list(self.weights))


class SimpleClosedCurve(NormalMultiCurve):
    """Connected essential curve: a multicurve with exactly one component."""

    def __init__(self, tri, weights, _components=None):
        super().__init__(tri, weights, _components=_components)
        if len(self._components) != 1:
            raise ValueError("curve has %d components" % len(self._components))

    @property
    def word(self):
        return self._components[0]["word"]


def _orient(T, comp):
    """Canonical orientation and starting point of a traced component: the
    first crossing of the smallest-index edge goes through that edge's
    positive side, and among such starts the word is lexicographically
    least."""
    word, points = comp["word"], comp["points"]
    e_min = min(T.side_edge[s] for s in word)
    pos_side = T.edge_sides[e_min][0]
    if pos_side not in word:
        word = W.reverse_word(T, word)
        points = tuple(reversed(points))
    n = len(word)
    starts = [k for k in range(n) if word[k] == pos_side]
    best = None
    for k in starts:
        cand = (word[k:] + word[:k], points[k:] + points[:k])
        if best is None or cand < best:
            best = cand
    return {"word": best[0], "points": best[1],
            "weights": W.word_weights(T, best[0])}


def multicurve_from_word_list(tri, word_list):
    """Canonical multicurve of a disjoint union given by reduced gate words.

    The circles are laid out together, pulled disjoint and foldback-free, and
    the resulting joint normal position is read off.  Raises if the classes
    are not pairwise disjoint.
    """
    curves = [scc_from_word(tri, w) for w in word_list]
    return join_disjoint(curves)


def scc_from_word(tri, word):
    """Simple closed curve from a gate word, with validation.

    The word is cyclically reduced; its weights are traced and the traced
    component must reproduce the word, which fails exactly when the class is
    not an embedded essential curve.
    """
    red = W.reduce_cyclic(tri, tuple(word))
    if not red:
        raise ValueError("word is null-homotopic in the punctured surface")
    if not W.is_valid_word(tri, red):
        raise ValueError("invalid gate word")
    weights = W.word_weights(tri, red)
    comps = W.trace(tri, weights)
    if len(comps) != 1:
        raise ValueError("word does not describe a simple closed curve "
                         "(%d traced components)" % len(comps))
    if W.canonical_word(tri, comps[0]["word"]) != W.canonical_word(tri, red):
        raise ValueError("word is not embedded (trace mismatch)")
    if W.is_vertex_link(tri, weights):
        raise ValueError("curve is null-homotopic (vertex link)")
    return SimpleClosedCurve(tri, weights, _components=[_orient(tri, comps[0])])


def join_disjoint(curves):
    """Canonical multicurve underlying pairwise-disjoint curves."""
    if not curves:
        raise ValueError("no curves to join")
    tri = curves[0].tri
    lay = Layout(tri, [c.component_data() for c in curves])
    lay.reduce()
    if lay.total_crossings() != 0:
        raise ValueError("curves are not pairwise disjoint")
    lay.reduce_foldbacks()
    weights = tuple(len(lay.order[e]) for e in range(tri.n_edges))
    return NormalMultiCurve(tri, weights)


# -- intersections ------------------------------------------------------------


@lru_cache(maxsize=32768)
def _geom_int_cached(tri, w1, w2):
    c1 = NormalMultiCurve(tri, w1)
    c2 = NormalMultiCurve(tri, w2)
    lay = Layout(tri, [c1.component_data(), c2.component_data()])
    lay.reduce()
    return lay.crossings_between(0, 1)


def geometric_intersection(c1, c2):
    """Minimal transverse intersection number of the isotopy classes."""
    if c1.tri != c2.tri:
        raise ValueError("curves live on different triangulations")
    if c1.weights == c2.weights:
        return 0
    a, b = sorted((c1.weights, c2.weights))
    return _geom_int_cached(c1.tri, a, b)


def algebraic_intersection_curves(c1, c2):
    """Signed intersection sum of the canonically oriented curves."""
    if c1.tri != c2.tri:
        raise ValueError("curves live on different triangulations")
    lay = Layout(c1.tri, [c1.component_data(), c2.component_data()])
    return lay.signed_sum(0, 1)


def is_isotopic(c1, c2):
    """Equality of isotopy classes on the closed surface.

    Equal normal coordinates decide it on the punctured surface; otherwise
    the classes are isotopic exactly when they are disjoint and cobound an
    annulus (which may contain the vertex)."""
    if c1.tri != c2.tri:
        raise ValueError("curves live on different triangulations")
    if c1.weights == c2.weights:
        return True
    if c1.n_components != c2.n_components:
        return False
    if c1.n_components > 1:
        used = []
        comps2 = c2.components()
        for a in c1.components():
            hit = None
            for j, b in enumerate(comps2):
                if j not in used and is_isotopic(a, b):
                    hit = j
                    break
            if hit is None:
                return False
            used.append(hit)
        return True
    return _scc_parallel(c1, c2)


@lru_cache(maxsize=32768)
def _scc_parallel_cached(tri, w1, w2):
    c1 = SimpleClosedCurve(tri, w1)
    c2 = SimpleClosedCurve(tri, w2)
    lay = Layout(tri, [c1.component_data(), c2.component_data()])
    lay.reduce()
    if lay.total_crossings() != 0:
        return False
    lay.reduce_foldbacks()
    for reg in lay.regions():
        if reg.chi != 0 or len(reg.boundary) != 2:
            continue
        owners = []
        for walk in reg.boundary:
            ows = {lay.circles[it[1]].owner for it in walk if it[0] == "seg"}
            owners.append(ows)
        if owners == [{0}, {1}] or owners == [{1}, {0}]:
            return True
    return False


def _scc_parallel(c1, c2):
    a, b = sorted((c1.weights, c2.weights))
    return _scc_parallel_cached(c1.tri, a, b)


# -- homology ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _basis_curves(tri):
    """Canonical basis curves (a_i, b_i) plus the sign making <a_i,b_i> = +1
    with the stored orientations."""
    g = tri.genus
    out = []
    for i in range(1, g + 1):
        a = named_curve(tri, "a%d" % i)
        b = named_curve(tri, "b%d" % i)
        p = algebraic_intersection_curves(a, b)
        if p not in (1, -1):
            raise RuntimeError("basis pairing degenerate on handle %d" % i)
        out.append((a, b, p))
    return tuple(out)


def algebraic_class(c):
    """Homology class in the basis a1,b1,...,ag,bg (additive over
    components, canonical orientations)."""
    tri = c.tri
    coords = []
    for (a, b, p) in _basis_curves(tri):
        x = algebraic_intersection_curves(c, b) * p
        y = algebraic_intersection_curves(a, c) * p
        coords += [x, y]
    return HomologyClass(tri.genus, tuple(coords))


# -- named curves ---------------------------------------------------------------


def _edge_pushoff_words(T, edge):
    """Gate words of the two boundary circles of a neighborhood of the given
    edge loop together with the vertex."""
    i = T.end_position(edge, 0)
    j = T.end_position(edge, 1)
    D = len(T.rotation)
    gates = T.rotation_gates()

    def arc(frm, to):
        out = []
        k = (frm + 1) % D
        while k != to:
            t, kk = T.rotation[k]
            out.append(3 * t + kk)
            k = (k + 1) % D
        return tuple(out)

    return arc(i, j), arc(j, i)


@lru_cache(maxsize=None)
def _named_cached(tri, name):
    g = tri.genus
    if name.startswith("a") or name.startswith("b"):
        idx = int(name[1:])
        if not (1 <= idx <= g):
            raise ValueError("no curve %s on genus %d" % (name, g))
        edge = tri.edge_index(name)
    elif name.startswith("sep"):
        idx = int(name[3:])
        if not (1 <= idx <= g - 1):
            raise ValueError("no separating curve %s on genus %d" % (name, g))
        edge = tri.edge_index("E%d" % idx)
    else:
        raise ValueError("unknown curve name %r" % name)
    w1, w2 = _edge_pushoff_words(tri, edge)
    cands = []
    for w in (w1, w2):
        red = W.reduce_cyclic(tri, w)
        if red:
            cands.append(scc_from_word(tri, red))
    if not cands:
        raise RuntimeError("pushoff of %s degenerated" % name)
    cands.sort(key=lambda c: c.weights)
    return cands[0]


def named_curve(tri, name):
    """Catalogued curve by name: a_i, b_i (handle curves), sep_i (separating
    curve between handles i and i+1), or a torus slope '(p,q)'."""
    if isinstance(name, tuple):
        if tri.genus != 1:
            raise ValueError("slope names only apply to the torus")
        return slope_curve(tri, 1, name[0], name[1])
    return _named_cached(tri, name)


# -- twists ---------------------------------------------------------------------


def dehn_twist(c, about, power):
    """Dehn twist of c about a simple closed curve, exact on isotopy classes.

    The handedness is fixed so that on homology
    [T^n_b(c)] = [c] + n <c,b> [b].
    """
    if power == 0:
        return c
    if c.tri != about.tri:
        raise ValueError("curves live on different triangulations")
    T = c.tri
    lay = Layout(T, [c.component_data(), about.component_data()])
    lay.reduce()
    if lay.total_crossings() == 0:
        return c
    b_circles = lay.circle_indices_of(1)
    if len(b_circles) != 1:
        raise ValueError("twisting curve must be connected")
    bc = lay.circles[b_circles[0]]
    nb = len(bc.gates)

    new_words = []
    for ci in lay.circle_indices_of(0):
        circ = lay.circles[ci]
        out = []
        for k in range(len(circ.gates)):
            out.append(circ.gates[k])
            for (_, xid) in lay._strand_crossings.get((id(circ), k), []):
                (_, c1, k1, _, c2, k2, _, sg, _) = lay._crossings[xid]
                m = k1 if c1 is bc else k2
                s = sg if c1 is circ else -sg
                forward = (s > 0) != (power > 0)
                if forward:
                    loop = [bc.gates[(m + 1 + i) % nb] for i in range(nb)]
                else:
                    loop = [T.partner[bc.gates[(m - i) % nb]] for i in range(nb)]
                out.extend(loop * abs(power))
        new_words.append(tuple(out))
    comps = [scc_from_word(T, w) for w in new_words]
    if len(comps) == 1:
        return comps[0] if isinstance(c, SimpleClosedCurve) else \
            NormalMultiCurve(T, comps[0].weights)
    return join_disjoint(comps)


@dataclass(frozen=True)
class MappingClassWord:
    """Composition of twist instructions, applied left to right."""
    twists: tuple  # of (SimpleClosedCurve, power)

    def __post_init__(self):
        for curve, power in self.twists:
            if power == 0:
                raise ValueError("zero twist power in mapping class word")
            if curve.tri != self.twists[0][0].tri:
                raise ValueError("mixed triangulations in mapping class word")

    def inverse(self):
        return MappingClassWord(tuple((c, -p) for c, p in reversed(self.twists)))


def apply_mapping_class(word, c):
    for curve, power in word.twists:
        c = dehn_twist(c, curve, power)
    return c


# -- torus-slope curves ------------------------------------------------------


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


@lru_cache(maxsize=None)
def _slope_cached(tri, handle, p, q):
    a = named_curve(tri, "a%d" % handle)
    b = named_curve(tri, "b%d" % handle)
    cur_p, cur_q = p, q
    ops = []
    while not (cur_q == 0 and abs(cur_p) == 1) and \
            not (cur_p == 0 and abs(cur_q) == 1):
        if cur_p != 0 and (cur_q == 0 or abs(cur_q) >= abs(cur_p)):
            # T_a^n: (p, q) -> (p - n q, q) keeps q; act on q via b instead:
            # T_b^n: (p, q) -> (p, q + n p); choose n to shrink |q|
            n = -round(cur_q / cur_p)
            if n == 0:
                n = -1 if cur_q * cur_p > 0 else 1
            ops.append((b, n))
            cur_q = cur_q + n * cur_p
        else:
            # T_a^n: (p, q) -> (p - n q, q); shrink |p|
            n = round(cur_p / cur_q)
            if n == 0:
                n = 1 if cur_p * cur_q > 0 else -1
            ops.append((a, n))
            cur_p = cur_p - n * cur_q
    cur = a if cur_q == 0 else b
    for curve, n in reversed(ops):
        cur = dehn_twist(cur, curve, -n)
    return cur


def slope_curve(tri, handle, p, q):
    """The curve of class p*a_h + q*b_h supported in handle h (coprime p,q).

    On the torus these are exactly the slope curves; on higher genus they
    live in the one-holed torus of the handle."""
    if _gcd(p, q) != 1:
        raise ValueError("slope (%d,%d) is not primitive" % (p, q))
    if not (1 <= handle <= tri.genus):
        raise ValueError("no handle %d at genus %d" % (handle, tri.genus))
    if (p, q) in ((1, 0), (-1, 0)):
        return named_curve(tri, "a%d" % handle)
    if (p, q) in ((0, 1), (0, -1)):
        return named_curve(tri, "b%d" % handle)
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return _slope_cached(tri, handle, p, q)


# -- band sums -----------------------------------------------------------------


def band_sum_words(T, word1, k1, word2, k2, eps, arc_gates):
    """Gate word of the band sum: traverse curve 1 from just after its
    crossing k1, run along the arc, traverse curve 2 from after k2 (with
    orientation eps), and return along the arc."""
    n1, n2 = len(word1), len(word2)
    w = [word1[(k1 + 1 + i) % n1] for i in range(n1)]
    w += list(arc_gates)
    if eps > 0:
        w += [word2[(k2 + 1 + i) % n2] for i in range(n2)]
    else:
        w += [T.partner[word2[(k2 - i) % n2]] for i in range(n2)]
    w += [T.partner[s] for s in reversed(arc_gates)]
    return tuple(w)
