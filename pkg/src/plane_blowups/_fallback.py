"""NumPy versions of the F_p row-reduction kernels, same contract as the compiled ones."""

import numpy as np


def _eliminate(a, p, full):
    rows, cols = a.shape
    rank = 0
    pivots = []
    for c in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(a[rank:, c])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), -1, p)
        a[rank, c:] = a[rank, c:] * inv % p
        start = 0 if full else rank + 1
        col = a[start:, c].copy()
        if full:
            col[rank] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            idx = hit + start
            a[idx, c:] = (a[idx, c:] - np.outer(col[hit], a[rank, c:]) % p) % p
        pivots.append(c)
        rank += 1
    return pivots


def rref_modp(a, p):
    return _eliminate(a, int(p), True)


def rank_modp(a, p):
    return len(_eliminate(a, int(p), False))
