"""Pure-Python reference versions of the hot loops.

Every function here has a compiled twin in ``_ckernels.pyx`` with the same
signature and results; :mod:`ekr_kit._kernels` picks one at import time.
"""
from __future__ import annotations

PSD = 0
NEGATIVE_DIAGONAL = 1
ZERO_DIAGONAL_OFFDIAG = 2

PIVOT_LARGEST = 0
PIVOT_FIRST = 1


def intersection_sizes(masks):
    """Matrix of ``popcount(masks[u] & masks[v])``."""
    return [[(a & b).bit_count() for b in masks] for a in masks]


def sym_bareiss(a, rule=PIVOT_LARGEST):
    """Fraction-free symmetric elimination with diagonal pivots only.

    ``a`` is a full symmetric integer matrix (list of lists) and is
    overwritten. Returns ``(status, pivots, minors, where, value)``:
    ``pivots`` are the row indices eliminated in order, ``minors[s]`` is the
    leading principal minor on ``pivots[:s+1]``, ``where`` locates the
    failure (``(i,)`` for a negative diagonal, ``(i, j)`` for a zero diagonal
    whose row is not zero) and ``value`` is the eliminated entry there,
    i.e. the Schur complement entry times the last minor.
    """
    rem = list(range(len(a)))
    prev = 1
    pivots = []
    minors = []
    while rem:
        best = -1
        bestval = 0
        for i in rem:
            d = a[i][i]
            if d < 0:
                return NEGATIVE_DIAGONAL, pivots, minors, (i,), d
            if d > bestval:
                if rule == PIVOT_FIRST:
                    if best < 0:
                        best, bestval = i, d
                else:
                    best, bestval = i, d
        if best < 0:
            for x, i in enumerate(rem):
                ai = a[i]
                for j in rem[x + 1:]:
                    if ai[j] != 0:
                        return ZERO_DIAGONAL_OFFDIAG, pivots, minors, (i, j), ai[j]
            return PSD, pivots, minors, (), 0
        q = best
        p = bestval
        rem.remove(q)
        rowq = a[q]
        for x, i in enumerate(rem):
            ai = a[i]
            aiq = ai[q]
            if aiq == 0:
                if p == prev:
                    continue
                for j in rem[x:]:
                    v = (p * ai[j]) // prev
                    ai[j] = v
                    a[j][i] = v
            else:
                for j in rem[x:]:
                    v = (p * ai[j] - aiq * rowq[j]) // prev
                    ai[j] = v
                    a[j][i] = v
        prev = p
        pivots.append(q)
        minors.append(p)
    return PSD, pivots, minors, (), 0


def bareiss_rank(a):
    """Rank of an integer matrix by fraction-free row echelon; ``a`` is overwritten."""
    nrows = len(a)
    if nrows == 0:
        return 0
    ncols = len(a[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        if rank == nrows:
            break
        r = rank
        while r < nrows and a[r][c] == 0:
            r += 1
        if r == nrows:
            continue
        a[rank], a[r] = a[r], a[rank]
        prow = a[rank]
        p = prow[c]
        for r in range(rank + 1, nrows):
            row = a[r]
            arc = row[c]
            if arc == 0:
                if p != prev:
                    for j in range(c + 1, ncols):
                        row[j] = (p * row[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (p * row[j] - arc * prow[j]) // prev
                row[c] = 0
        prev = p
        rank += 1
    return rank


def max_clique(adj):
    """Maximum clique of a graph given as neighbour bitmasks.

    Branch and bound with a greedy-colouring bound. Vertices are explored
    in index order so the returned clique (sorted) is deterministic.
    """
    n = len(adj)
    best = []
    cur = []

    def colour_sort(P):
        order = []
        colours = []
        U = P
        k = 0
        while U:
            k += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~(adj[v] | low)
                U &= ~low
                order.append(v)
                colours.append(k)
        return order, colours

    def expand(P):
        nonlocal best
        order, colours = colour_sort(P)
        for idx in range(len(order) - 1, -1, -1):
            if len(cur) + colours[idx] <= len(best):
                return
            v = order[idx]
            cur.append(v)
            newP = P & adj[v]
            if newP:
                expand(newP)
            elif len(cur) > len(best):
                best = list(cur)
            cur.pop()
            P &= ~(1 << v)

    if n:
        expand((1 << n) - 1)
    return sorted(best)
