# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Row reduction over F_p on int64 matrices (entries kept in [0, p))."""

from libc.stdint cimport int64_t


cdef inline int64_t _inverse(int64_t a, int64_t p):
    cdef int64_t t = 0, new_t = 1, r = p, new_r = a, q, tmp
    while new_r != 0:
        q = r // new_r
        tmp = t - q * new_t
        t = new_t
        new_t = tmp
        tmp = r - q * new_r
        r = new_r
        new_r = tmp
    if t < 0:
        t += p
    return t


def rref_modp(int64_t[:, ::1] a, int64_t p):
    """Reduce ``a`` in place to reduced row echelon form; return pivot columns."""
    cdef Py_ssize_t rows = a.shape[0], cols = a.shape[1]
    cdef Py_ssize_t rank = 0, c, i, j, piv
    cdef int64_t inv, f, tmp
    pivots = []
    for c in range(cols):
        if rank == rows:
            break
        piv = -1
        for i in range(rank, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(c, cols):
                tmp = a[rank, j]
                a[rank, j] = a[piv, j]
                a[piv, j] = tmp
        inv = _inverse(a[rank, c], p)
        for j in range(c, cols):
            a[rank, j] = (a[rank, j] * inv) % p
        for i in range(rows):
            if i == rank:
                continue
            f = a[i, c]
            if f == 0:
                continue
            f = p - f
            for j in range(c, cols):
                if a[rank, j] != 0:
                    a[i, j] = (a[i, j] + f * a[rank, j]) % p
        pivots.append(c)
        rank += 1
    return pivots


def rank_modp(int64_t[:, ::1] a, int64_t p):
    """Rank by forward elimination; ``a`` is destroyed."""
    cdef Py_ssize_t rows = a.shape[0], cols = a.shape[1]
    cdef Py_ssize_t rank = 0, c, i, j, piv
    cdef int64_t inv, f, tmp
    for c in range(cols):
        if rank == rows:
            break
        piv = -1
        for i in range(rank, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(c, cols):
                tmp = a[rank, j]
                a[rank, j] = a[piv, j]
                a[piv, j] = tmp
        inv = _inverse(a[rank, c], p)
        for j in range(c, cols):
            a[rank, j] = (a[rank, j] * inv) % p
        for i in range(rank + 1, rows):
            f = a[i, c]
            if f == 0:
                continue
            f = p - f
            for j in range(c, cols):
                if a[rank, j] != 0:
                    a[i, j] = (a[i, j] + f * a[rank, j]) % p
        rank += 1
    return rank
