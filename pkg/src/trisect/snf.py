"""Smith normal form of small integer matrices (homology certificates)."""
from __future__ import annotations


def smith_normal_form(mat):
    """Diagonal of the Smith normal form of an integer matrix.

    Returns the list of non-negative invariant factors d_1 | d_2 | ...,
    padded with zeros to min(rows, cols).
    """
    m = [row[:] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    diag = []
    s = 0
    while s < min(rows, cols):
        # find a pivot of least absolute value in the lower-right block
        piv = None
        best = None
        for i in range(s, rows):
            for j in range(s, cols):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < best):
                    best = abs(m[i][j])
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        m[s], m[i] = m[i], m[s]
        for r in range(rows):
            m[r][s], m[r][j] = m[r][j], m[r][s]
        while True:
            done = True
            for i in range(s + 1, rows):
                q = m[i][s] // m[s][s]
                if q:
                    for j in range(s, cols):
                        m[i][j] -= q * m[s][j]
                if m[i][s]:
                    m[s], m[i] = m[i], m[s]
                    done = False
            for j in range(s + 1, cols):
                q = m[s][j] // m[s][s]
                if q:
                    for i in range(s, rows):
                        m[i][j] -= q * m[i][s]
                if m[s][j]:
                    for i in range(s, rows):
                        m[i][s], m[i][j] = m[i][j], m[i][s]
                    done = False
            if done:
                break
        diag.append(abs(m[s][s]))
        s += 1
    diag += [0] * (min(rows, cols) - len(diag))
    # enforce divisibility
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            if a and b % a != 0:
                from math import gcd
                g = gcd(a, b)
                diag[i], diag[j] = g, a * b // g
    diag_nonzero = sorted(d for d in diag if d)
    return diag_nonzero + [0] * (len(diag) - len(diag_nonzero))
