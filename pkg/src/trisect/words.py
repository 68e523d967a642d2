"""Gate words: curves as cyclic crossing sequences through the triangulation.

A gate word records, for one traversal of a closed curve transverse to the
triangulation, the side slot through which the curve *exits* its current
triangle at each edge crossing.  After gate s the curve sits in the triangle
of partner(s), entered through slot partner(s).

Cyclically reduced gate words are exactly the non-backtracking closed walks
in the dual graph, and the surface minus its vertex deformation-retracts to
that graph.  Hence reduced cyclic words classify free homotopy classes of
loops in the punctured surface, and for an embedded essential curve the
reduced word is the crossing sequence of its unique normal representative.
Its edge-crossing counts are the curve's normal coordinates.
"""
from __future__ import annotations


def is_valid_word(T, word):
    if not word:
        return False
    for i, s in enumerate(word):
        if not (0 <= s < 3 * T.n_tris):
            return False
        nxt = word[(i + 1) % len(word)]
        if T.tri_of(nxt) != T.tri_of(T.partner[s]):
            return False
    return True


def reduce_cyclic(T, word):
    """Cyclic free reduction: remove foldbacks (exit through the entry slot).

    Returns a tuple; the empty tuple means the loop was null-homotopic in the
    punctured surface (contained in a triangle).
    """
    p = T.partner
    w = list(word)
    changed = True
    while changed and w:
        changed = False
        out = []
        i = 0
        n = len(w)
        while i < n:
            if out and w[i] == p[out[-1]]:
                out.pop()
                changed = True
                i += 1
            else:
                out.append(w[i])
                i += 1
        # wrap-around cancellations
        while len(out) >= 2 and out[0] == p[out[-1]]:
            out = out[1:-1]
            changed = True
        w = out
    return tuple(w)


def reverse_word(T, word):
    """Gate word of the same curve traversed backwards."""
    return tuple(T.partner[s] for s in reversed(word))


def canonical_rotation(word):
    if not word:
        return ()
    n = len(word)
    best = None
    for k in range(n):
        cand = word[k:] + word[:k]
        if best is None or cand < best:
            best = cand
    return best


def canonical_word(T, word):
    """Canonical representative of the unoriented cyclic word: the lex-least
    rotation over both traversal directions."""
    a = canonical_rotation(tuple(word))
    b = canonical_rotation(reverse_word(T, word))
    return a if a <= b else b


def word_weights(T, word):
    w = [0] * T.n_edges
    for s in word:
        w[T.side_edge[s]] += 1
    return tuple(w)


# -- admissibility and tracing ------------------------------------------------

def check_matching(T, weights):
    """Triangle inequalities and parity per triangle; raises on failure."""
    if len(weights) != T.n_edges:
        raise ValueError("expected %d edge weights" % T.n_edges)
    if any(w < 0 for w in weights):
        raise ValueError("negative edge weight")
    for t in range(T.n_tris):
        ws = [weights[T.side_edge[3 * t + k]] for k in range(3)]
        if sum(ws) % 2 != 0:
            raise ValueError("odd weight sum in triangle %d" % t)
        for k in range(3):
            if ws[k] > ws[(k + 1) % 3] + ws[(k + 2) % 3]:
                raise ValueError("triangle inequality fails in triangle %d" % t)


def corner_counts(T, weights, t):
    """Numbers of arcs joining slot pairs (0,1), (1,2), (2,0) of triangle t."""
    w = [weights[T.side_edge[3 * t + k]] for k in range(3)]
    n01 = (w[0] + w[1] - w[2]) // 2
    n12 = (w[1] + w[2] - w[0]) // 2
    n20 = (w[2] + w[0] - w[1]) // 2
    return n01, n12, n20


def slot_points(T, weights, side):
    """Arc endpoints on a side slot in boundary order.

    Each entry is (other_slot_of_triangle, depth) where depth counts nesting
    from the corner the arc cuts off.  The arcs cutting the corner at the
    start of the slot come first (innermost first), then the arcs cutting
    the end corner (innermost last).
    """
    t, k = T.tri_of(side), T.slot_of(side)
    pairs = corner_counts(T, weights, t)
    # corner at start of slot k joins slots k-1,k; at end joins slots k,k+1.
    def count(i, j):
        key = tuple(sorted((i, j)))
        return {(0, 1): pairs[0], (1, 2): pairs[1], (0, 2): pairs[2]}[key]

    start_n = count((k - 1) % 3, k)
    end_n = count(k, (k + 1) % 3)
    pts = [((k - 1) % 3, d) for d in range(start_n)]
    pts += [((k + 1) % 3, d) for d in range(end_n - 1, -1, -1)]
    return pts


def edge_position(T, side, slot_pos, total):
    """Convert a position along a side slot to a position along the edge's
    canonical direction."""
    return slot_pos if T.side_sign[side] > 0 else total - 1 - slot_pos


def trace(T, weights):
    """Trace the normal multicurve with the given admissible coordinates.

    Returns a list of components, each a dict with keys 'word' (gate word)
    and 'weights'.  Raises ValueError if the coordinates are inadmissible.
    """
    check_matching(T, weights)
    if all(w == 0 for w in weights):
        return []
    # endpoint -> (edge, edge position); arcs listed per triangle
    # arc id: (t, pair, depth) with pair in {(0,1),(1,2),(2,0)}
    ends = {}  # (edge, pos) -> list of (arc_id, side crossed)
    for t in range(T.n_tris):
        for k in range(3):
            side = 3 * t + k
            e = weights[T.side_edge[side]]
            for slot_pos, (other, depth) in enumerate(slot_points(T, weights, side)):
                pair = tuple(sorted((k, other)))
                arc = (t, pair, depth)
                pos = edge_position(T, side, slot_pos, e)
                ends.setdefault((T.side_edge[side], pos), []).append((arc, side))
    for key, lst in ends.items():
        if len(lst) != 2:
            raise ValueError("point %s met %d arc ends" % (key, len(lst)))

    # arc -> its two (point, side) incidences
    arc_pts = {}
    for pt, lst in ends.items():
        for arc, side in lst:
            arc_pts.setdefault(arc, []).append((pt, side))
    for arc, lst in arc_pts.items():
        if len(lst) != 2:
            raise ValueError("arc %s has %d endpoints" % (arc, len(lst)))

    visited = set()
    components = []
    for arc0 in sorted(arc_pts):
        if arc0 in visited:
            continue
        word = []
        points = []
        start = (arc0, min(arc_pts[arc0]))
        cur = start
        while True:
            arc, (pt, side) = cur
            visited.add(arc)
            word.append(side)  # exit the arc's triangle through this side
            points.append(pt)
            (a1, _), (a2, _) = ends[pt]
            nxt = a2 if a1 == arc else a1
            (p1, sd1), (p2, sd2) = arc_pts[nxt]
            cur = (nxt, (p2, sd2) if p1 == pt else (p1, sd1))
            if cur == start:
                break
        components.append({
            "word": tuple(word),
            "points": tuple(points),
            "weights": word_weights(T, tuple(word)),
        })
    return components


def is_vertex_link(T, weights):
    return all(w == 2 for w in weights)
