"""Cut systems, handlebodies, handle slides and Heegaard diagrams.

A cut system (g disjoint, pairwise non-isotopic curves with connected
complement) determines a handlebody bounded by the surface.  A loop bounds a
disk in that handlebody exactly when its crossing word against the cut
curves is trivial in the free group on the cut disks, which we read off any
transverse position.  Standardness of a Heegaard diagram is certified by a
bounded best-first search over handle slides of both systems, with a Smith
normal form certificate reported when the search is exhausted.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from . import words as W
from .curves import (NormalMultiCurve, SimpleClosedCurve,
                     algebraic_intersection_curves, band_sum_words,
                     geometric_intersection, is_isotopic, scc_from_word)
from .layout import Layout
from .snf import smith_normal_form


class CutSystem:
    """g disjoint, independent curves: a handlebody bounded by the surface."""

    def __init__(self, curves):
        if not curves:
            raise ValueError("empty cut system")
        tri = curves[0].tri
        g = tri.genus
        if len(curves) != g:
            raise ValueError("cut system needs %d curves, got %d"
                             % (g, len(curves)))
        for c in curves:
            if c.tri != tri:
                raise ValueError("curves on different triangulations")
            if not isinstance(c, SimpleClosedCurve):
                raise ValueError("cut system entries must be connected curves")
        for i in range(g):
            for j in range(i + 1, g):
                if geometric_intersection(curves[i], curves[j]) != 0:
                    raise ValueError("cut curves %d and %d intersect" % (i, j))
                if is_isotopic(curves[i], curves[j]):
                    raise ValueError("cut curves %d and %d are isotopic" % (i, j))
        if not _independent_mod2(curves):
            raise ValueError("cut curve classes are dependent mod 2 "
                             "(complement is disconnected)")
        self.tri = tri
        self.curves = tuple(curves)

    def __iter__(self):
        return iter(self.curves)

    def __len__(self):
        return len(self.curves)

    def __getitem__(self, i):
        return self.curves[i]

    def weights_key(self):
        return tuple(sorted(c.weights for c in self.curves))

    def __repr__(self):
        return "CutSystem(%s, %d curves)" % (self.tri.label, len(self.curves))


def _independent_mod2(curves):
    from .curves import algebraic_class
    vecs = [list(x % 2 for x in algebraic_class(c).coords) for c in curves]
    n = len(vecs[0])
    rank = 0
    for col in range(n):
        piv = None
        for r in range(rank, len(vecs)):
            if vecs[r][col]:
                piv = r
                break
        if piv is None:
            continue
        vecs[rank], vecs[piv] = vecs[piv], vecs[rank]
        for r in range(len(vecs)):
            if r != rank and vecs[r][col]:
                vecs[r] = [(x + y) % 2 for x, y in zip(vecs[r], vecs[rank])]
        rank += 1
    return rank == len(vecs)


def make_cut_system(curves):
    return CutSystem(list(curves))


# -- disk bounding ---------------------------------------------------------


def _free_cyclic_reduce(letters):
    out = []
    for x in letters:
        if out and out[-1][0] == x[0] and out[-1][1] == -x[1]:
            out.pop()
        else:
            out.append(x)
    while len(out) >= 2 and out[0][0] == out[-1][0] and out[0][1] == -out[-1][1]:
        out = out[1:-1]
    return out


def crossing_word(c, H):
    """Word of c in the free group on the cut disks of H, as (index, sign)
    letters in traversal order.  Any transverse position gives a word equal
    in the free group; the layout keeps the cut curves disjoint."""
    lay = Layout(c.tri, [h.component_data() for h in H] + [c.component_data()])
    g = len(H)
    lay.reduce(scope={frozenset((i, j)) for i in range(g) for j in range(i)})
    for i in range(g):
        for j in range(i):
            if lay.crossings_between(i, j):
                raise RuntimeError("cut system failed to separate in layout")
    seqs = lay.readings(g, range(g))
    if len(seqs) != 1:
        raise ValueError("crossing words are read along connected curves")
    return [(owner, s) for (owner, s, _) in seqs[0]]


def bounds_disk(c, H):
    """True iff c is null-homotopic in the handlebody defined by H."""
    return not _free_cyclic_reduce(crossing_word(c, H))


def bounds_disk_oracle(c, H, rng):
    """Independent check: abelianized vector must vanish, and the freely
    reduced word from a random reading start must be empty."""
    word = crossing_word(c, H)
    totals = {}
    for i, s in word:
        totals[i] = totals.get(i, 0) + s
    if any(v != 0 for v in totals.values()):
        return False
    k = rng.randrange(len(word)) if word else 0
    rotated = word[k:] + word[:k]
    return not _free_cyclic_reduce(rotated)


# -- arcs in the complement and handle slides --------------------------------


@dataclass(frozen=True)
class GuideArc:
    """Embedded arc in the complement of a curve system, as the gate word of
    its crossing sequence, attached to strand from_k of the mover and strand
    to_k of the target; orient is the direction the target loop is traversed
    in the band sum."""
    gates: tuple
    from_k: int
    to_k: int
    orient: int

    def to_json(self):
        return {"gates": list(self.gates), "from": self.from_k,
                "to": self.to_k, "orient": self.orient}

    @staticmethod
    def from_json(d):
        return GuideArc(tuple(d["gates"]), d["from"], d["to"], d["orient"])


def _disjoint_layout(curves):
    lay = Layout(curves[0].tri, [c.component_data() for c in curves])
    lay.reduce()
    if lay.total_crossings() != 0:
        raise ValueError("curve system is not disjoint")
    return lay


def region_arcs(curves, i, j, limit=6):
    """Candidate embedded arcs from curve i to curve j (i == j allowed)
    running through single complementary regions of the system.

    Deterministic order; at most `limit` arcs per region.
    """
    lay = _disjoint_layout(curves)
    T = lay.T
    out = []
    for reg in lay.regions():
        sides_i = []
        sides_j = []
        for walk in reg.boundary:
            for it in walk:
                if it[0] != "seg":
                    continue
                _, ci, k, seg_i, side = it
                owner = lay.circles[ci].owner
                if owner == i:
                    sides_i.append((ci, k, side))
                if owner == j:
                    sides_j.append((ci, k, side))
        if not sides_i or not sides_j:
            continue
        cell_of = {}
        for cid in reg.cells:
            for token in lay._cells[cid]["segsides"]:
                cell_of[token] = cid
        # adjacency between cells of this region through side intervals
        interval_pairs = {}
        for cid in reg.cells:
            for iv in lay._cells[cid]["sides"]:
                interval_pairs.setdefault(iv, []).append(cid)
        nbrs = {}
        for iv, cs in interval_pairs.items():
            if len(cs) == 2:
                nbrs.setdefault(cs[0], []).append((iv, cs[1]))
                nbrs.setdefault(cs[1], []).append((iv, cs[0]))
        count = 0
        for (ci_a, k_a, side_a) in sorted(set(sides_i)):
            if count >= limit:
                break
            circ_a = lay.circles[ci_a]
            start_token = None
            for token, cid in cell_of.items():
                if token[0] == id(circ_a) and token[1] == k_a and token[3] == side_a:
                    start_token = token
                    break
            if start_token is None:
                continue
            start_cell = cell_of[start_token]
            # BFS through region cells
            prev = {start_cell: None}
            queue = [start_cell]
            qi = 0
            while qi < len(queue):
                cur = queue[qi]
                qi += 1
                for iv, nxt in sorted(nbrs.get(cur, []), key=lambda p: (p[0], p[1])):
                    if nxt not in prev:
                        prev[nxt] = (cur, iv)
                        queue.append(nxt)
            for (ci_b, k_b, side_b) in sorted(set(sides_j)):
                circ_b = lay.circles[ci_b]
                end_token = None
                for token, cid in cell_of.items():
                    if token[0] == id(circ_b) and token[1] == k_b and token[3] == side_b:
                        end_token = token
                        break
                if end_token is None or cell_of[end_token] not in prev:
                    continue
                path = []
                cur = cell_of[end_token]
                while prev[cur] is not None:
                    cur_prev, iv = prev[cur]
                    path.append((iv, cur))
                    cur = cur_prev
                path.reverse()
                gates = []
                cur = start_cell
                ok = True
                for iv, nxt in path:
                    e, _ = iv
                    t = lay._cells[cur]["tri"]
                    s1, s2 = T.edge_sides[e]
                    if T.tri_of(s1) == t:
                        gates.append(s1)
                    elif T.tri_of(s2) == t:
                        gates.append(s2)
                    else:
                        ok = False
                        break
                    cur = nxt
                if not ok:
                    continue
                out.append((i, j, k_a, k_b, tuple(gates)))
                count += 1
                if count >= limit:
                    break
    seen = set()
    uniq = []
    for arc in out:
        if arc not in seen:
            seen.add(arc)
            uniq.append(arc)
    return uniq


def band_sum_curves(mover, target, arc):
    """Band sum of mover and target along the guide arc; raises if the word
    does not describe an embedded curve."""
    T = mover.tri
    w = band_sum_words(T, mover.word, arc.from_k, target.word, arc.to_k,
                       arc.orient, arc.gates)
    return scc_from_word(T, w)


def handle_slide(H, mover, target, arc):
    """Slide curve `mover` of the cut system over `target` along the arc.

    The result is validated as a cut system defining the same handlebody:
    the slid curve must still bound a disk there (checked via bounds_disk on
    the old mover against the new system)."""
    if mover == target:
        raise ValueError("mover and target must differ")
    curves = list(H.curves)
    new_curve = band_sum_curves(curves[mover], curves[target], arc)
    new_curves = curves[:mover] + [new_curve] + curves[mover + 1:]
    new_H = CutSystem(new_curves)
    if not bounds_disk(curves[mover], new_H):
        raise ValueError("slide does not preserve the handlebody")
    return new_H


# -- Heegaard diagrams and standardness ----------------------------------------


@dataclass(frozen=True)
class HeegaardDiagram:
    alpha: CutSystem
    beta: CutSystem

    def __post_init__(self):
        if self.alpha.tri != self.beta.tri:
            raise ValueError("cut systems on different surfaces")

    @property
    def tri(self):
        return self.alpha.tri


@dataclass(frozen=True)
class Budget:
    max_slides: int = 6
    max_weight: int = 120
    frontier_cap: int = 4000

    def to_json(self):
        return {"max_slides": self.max_slides, "max_weight": self.max_weight,
                "frontier_cap": self.frontier_cap}


@dataclass(frozen=True)
class StandardnessVerdict:
    kind: str                   # "standard" or "unknown"
    k: int | None
    witness: tuple = ()         # slide records, replayable
    certificate: dict | None = None
    budget: Budget | None = None

    @property
    def is_standard(self):
        return self.kind == "standard"

    def to_json(self):
        return {
            "kind": self.kind, "k": self.k,
            "witness": [w for w in self.witness],
            "certificate": self.certificate,
            "budget": self.budget.to_json() if self.budget else None,
        }


def _standard_pattern(alpha, beta):
    """If the diagram is visibly standard (a matching of parallel and dual
    pairs, all other pairs disjoint), return k; else None."""
    g = len(alpha)
    inter = [[geometric_intersection(a, b) for b in beta] for a in alpha]
    for row in inter:
        if sum(row) > 1 or any(x not in (0, 1) for x in row):
            return None
    for j in range(g):
        if sum(inter[i][j] for i in range(g)) > 1:
            return None
    match = [None] * g
    used = set()
    for i in range(g):
        row = inter[i]
        if sum(row) == 1:
            j = row.index(1)
            if j in used:
                return None
            match[i] = ("dual", j)
            used.add(j)
    # remaining rows must pair with parallel partners
    free_js = [j for j in range(g) if j not in used]
    free_is = [i for i in range(g) if match[i] is None]
    for i in free_is:
        hit = None
        for j in free_js:
            if is_isotopic(alpha[i], beta[j]):
                hit = j
                break
        if hit is None:
            return None
        match[i] = ("parallel", hit)
        free_js.remove(hit)
    k = sum(1 for m in match if m[0] == "parallel")
    return k


def pairing_matrix(alpha, beta):
    return [[algebraic_intersection_curves(a, b) for b in beta] for a in alpha]


def smith_certificate(alpha, beta):
    mat = pairing_matrix(list(alpha), list(beta))
    diag = smith_normal_form(mat)
    zeros = sum(1 for d in diag if d == 0)
    units = sum(1 for d in diag if d == 1)
    return {
        "pairing": mat,
        "smith_diagonal": diag,
        "candidate_k": zeros,
        "consistent": zeros + units == len(diag),
    }


def _slide_moves(system, budget):
    """Candidate slides of one cut system along arcs in its own complement
    (slide arcs may cross the other system).

    Returns (mover, target, GuideArc) triples, deterministically ordered."""
    curves = list(system.curves)
    g = len(curves)
    arcs = []
    for i in range(g):
        for j in range(g):
            if i == j:
                continue
            arcs.extend(region_arcs(curves, i, j, limit=3))
    moves = []
    for (i, j, k_a, k_b, gates) in arcs:
        for eps in (1, -1):
            moves.append((i, j, GuideArc(gates, k_a, k_b, eps)))
    return moves


def verify_standard(diagram, budget=None):
    """Bounded best-first search for the standard form of a Heegaard diagram.

    Standard(k) comes with a replayable slide witness; otherwise Unknown with
    the Smith normal form certificate of the signed pairing matrix.
    """
    if budget is None:
        budget = Budget()
    alpha0, beta0 = diagram.alpha, diagram.beta
    cert = smith_certificate(alpha0, beta0)

    start = (alpha0, beta0)
    k0 = _standard_pattern(list(alpha0), list(beta0))
    if k0 is not None:
        if not cert["consistent"] or cert["candidate_k"] != k0:
            raise RuntimeError("pattern and Smith certificate disagree")
        return StandardnessVerdict("standard", k0, (), cert, budget)

    def total_weight(state):
        a, b = state
        return sum(sum(c.weights) for c in a) + sum(sum(c.weights) for c in b)

    def key(state):
        a, b = state
        return (a.weights_key(), b.weights_key())

    counter = 0
    heap = []
    heapq.heappush(heap, (0, total_weight(start), counter, start, ()))
    visited = {key(start)}
    expansions = 0
    while heap:
        slides, wt, _, state, trail = heapq.heappop(heap)
        if slides >= budget.max_slides:
            continue
        expansions += 1
        if expansions > budget.frontier_cap:
            break
        alpha, beta = state
        for side, sysname in ((0, "alpha"), (1, "beta")):
            system = alpha if side == 0 else beta
            for (i, j, arc) in _slide_moves(system, budget):
                try:
                    slid = handle_slide(system, i, j, arc)
                except (ValueError, RuntimeError):
                    continue
                ns = (slid, beta) if side == 0 else (alpha, slid)
                if total_weight(ns) > budget.max_weight:
                    continue
                kk = key(ns)
                if kk in visited:
                    continue
                visited.add(kk)
                rec = {"side": sysname, "mover": i, "target": j,
                       "arc": arc.to_json()}
                ntrail = trail + (rec,)
                kpat = _standard_pattern(list(ns[0]), list(ns[1]))
                if kpat is not None:
                    if not cert["consistent"] or cert["candidate_k"] != kpat:
                        raise RuntimeError(
                            "pattern and Smith certificate disagree")
                    return StandardnessVerdict("standard", kpat, ntrail,
                                               cert, budget)
                counter += 1
                heapq.heappush(heap, (slides + 1, total_weight(ns), counter,
                                      ns, ntrail))
    return StandardnessVerdict("unknown", None, (), cert, budget)


def replay_witness(diagram, witness):
    """Re-run a slide witness; returns the final diagram."""
    alpha, beta = diagram.alpha, diagram.beta
    for rec in witness:
        arc = GuideArc.from_json(rec["arc"])
        if rec["side"] == "alpha":
            alpha = handle_slide(alpha, rec["mover"], rec["target"], arc)
        else:
            beta = handle_slide(beta, rec["mover"], rec["target"], arc)
    return HeegaardDiagram(alpha, beta)


# -- pants decompositions of handlebody boundaries ----------------------------


def _pants_candidates(pants, H):
    """Valid one-curve extensions of a disjoint disk-bounding family: band
    sums of members along arcs in single complementary regions."""
    cands = []
    seen = set()
    n = len(pants)
    for i in range(n):
        for j in range(i, n):
            for (_, _, k_a, k_b, gates) in region_arcs(pants, i, j, limit=8):
                for eps in (1, -1):
                    arc = GuideArc(gates, k_a, k_b, eps)
                    try:
                        cand = band_sum_curves(pants[i], pants[j], arc)
                    except ValueError:
                        continue
                    if cand.weights in seen:
                        continue
                    ok = True
                    for p in pants:
                        if geometric_intersection(cand, p) != 0 \
                                or is_isotopic(cand, p):
                            ok = False
                            break
                    if ok and bounds_disk(cand, H):
                        seen.add(cand.weights)
                        cands.append(cand)
    return cands


def pants_for_handlebody(H):
    """Deterministic pants decomposition all of whose curves bound disks in
    the handlebody of H.

    The cut curves are completed to 3g-3 curves by iterated band sums along
    arcs in complementary regions (every further disk of the handlebody
    disjoint from the family is such a sum).  For the torus the single cut
    curve is the degenerate decomposition.
    """
    tri = H.tri
    g = tri.genus
    curves = list(H.curves)
    if g == 1:
        return curves
    target = 3 * g - 3
    pants = list(curves)

    def extend():
        if len(pants) == target:
            return True
        for cand in _pants_candidates(pants, H):
            pants.append(cand)
            if extend():
                return True
            pants.pop()
        return False

    if not extend():
        raise RuntimeError("pants completion failed for %r" % (H,))
    return pants
