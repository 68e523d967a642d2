"""Transport of curves between standard triangulations of different genus.

The chain layout of the standard triangulations makes the subsurface spanned
by a range of handles combinatorially rigid: a curve supported in handles
1..g of std-g is carried into std-(g+1) either fixing handle indices
(append) or shifting them up by one (prepend).  Both moves are local gate
rewrites: every crossing of the spine edge closing the chain is replaced by
a two-gate corridor through the new spine triangle, and all other gates keep
their slot, with triangle indices remapped.  Iterating the two moves embeds
std-g into std-G supported on handles offset+1..offset+g.
"""
from __future__ import annotations

from . import words as W
from .curves import SimpleClosedCurve, scc_from_word
from .surface import standard_triangulation


def _block_tri(i, part):
    # triangle index of block i's part (0,1,2); blocks are laid out first
    return 3 * (i - 1) + part


def _spine_tri(g, j):
    # triangle index of spine triangle S_j (2 <= j <= g-1) at genus g
    return 3 * g + (j - 2)


def append_word(T, word):
    """Rewrite a gate word on std-g into std-(g+1) fixing handle indices."""
    g = T.genus
    if g < 2:
        raise ValueError("transport starts at genus >= 2")
    T2 = standard_triangulation(g + 1)
    e_last = T.edge_index("E%d" % (g - 1))
    old_pos, old_neg = T.edge_sides[e_last]
    if old_pos != 3 * _block_tri(g, 2) + 2:
        raise RuntimeError("unexpected chain structure")
    s_g = _spine_tri(g + 1, g)

    def map_side(s):
        t, k = T.tri_of(s), T.slot_of(s)
        t2 = t if t < 3 * g else t + 3
        return 3 * t2 + k

    out = []
    for s in word:
        if s == old_pos:
            out += [map_side(s), 3 * s_g + 0]
        elif s == old_neg:
            out += [map_side(s), 3 * s_g + 1]
        else:
            out.append(map_side(s))
    return T2, tuple(out)


def prepend_word(T, word):
    """Rewrite a gate word on std-g into std-(g+1) shifting handles up by
    one."""
    g = T.genus
    if g < 2:
        raise ValueError("transport starts at genus >= 2")
    T2 = standard_triangulation(g + 1)
    e_first = T.edge_index("E1")
    old_pos, old_neg = T.edge_sides[e_first]
    if old_neg != 3 * _block_tri(1, 2) + 2:
        raise RuntimeError("unexpected chain structure")
    s_2 = _spine_tri(g + 1, 2)
    new_t23_slot2 = 3 * _block_tri(2, 2) + 2

    def map_side(s):
        t, k = T.tri_of(s), T.slot_of(s)
        t2 = t + 3 if t < 3 * g else t + 4
        return 3 * t2 + k

    out = []
    for s in word:
        if s == old_neg:
            out += [new_t23_slot2, 3 * s_2 + 2]
        elif s == old_pos:
            out += [map_side(s), 3 * s_2 + 1]
        else:
            out.append(map_side(s))
    return T2, tuple(out)


def transport_scc(c, target_genus, offset):
    """Embed a curve of std-g (g >= 2) into std-G, supported on handles
    offset+1 .. offset+g."""
    g = c.tri.genus
    if offset < 0 or offset + g > target_genus:
        raise ValueError("offset %d does not fit genus %d into %d"
                         % (offset, g, target_genus))
    T, word = c.tri, c.word
    for _ in range(offset):
        T, word = prepend_word(T, word)
        word = W.reduce_cyclic(T, word)
    while T.genus < target_genus:
        T, word = append_word(T, word)
        word = W.reduce_cyclic(T, word)
    return scc_from_word(T, word)


def transport_curves(curves, target_genus, offset):
    return [transport_scc(c, target_genus, offset) for c in curves]
