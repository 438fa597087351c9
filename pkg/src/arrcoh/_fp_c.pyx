# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernel over a prime field.

Same contract as ``arrcoh._fp_py`` (the pure-Python twin); selected at
import time by :mod:`arrcoh.fp`.  Entries are reduced mod p internally;
p must fit in 31 bits so products stay inside int64.
"""

from libc.stdlib cimport malloc, free


cdef long long _inv_mod(long long a, long long p) nogil:
    # Fermat inverse via binary exponentiation; p prime, a != 0 mod p.
    cdef long long result = 1
    cdef long long base = a % p
    cdef long long e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


cdef int _rref(long long* mat, int nrows, int ncols, long long p, int* pivots) nogil:
    cdef int r = 0, c, i, j, pivot_row
    cdef long long inv, f
    for c in range(ncols):
        pivot_row = -1
        for i in range(r, nrows):
            if mat[i * ncols + c] != 0:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        if pivot_row != r:
            for j in range(ncols):
                mat[r * ncols + j], mat[pivot_row * ncols + j] = (
                    mat[pivot_row * ncols + j], mat[r * ncols + j])
        inv = _inv_mod(mat[r * ncols + c], p)
        if inv != 1:
            for j in range(c, ncols):
                mat[r * ncols + j] = mat[r * ncols + j] * inv % p
        for i in range(nrows):
            if i != r and mat[i * ncols + c] != 0:
                f = mat[i * ncols + c]
                for j in range(c, ncols):
                    mat[i * ncols + j] = (mat[i * ncols + j] - f * mat[r * ncols + j]) % p
                    if mat[i * ncols + j] < 0:
                        mat[i * ncols + j] += p
        pivots[r] = c
        r += 1
        if r == nrows:
            break
    return r


cdef long long* _load(rows, int nrows, int ncols, long long p) except NULL:
    cdef long long* mat = <long long*> malloc(nrows * ncols * sizeof(long long))
    if mat == NULL:
        raise MemoryError()
    cdef int i, j
    cdef long long x
    for i in range(nrows):
        row = rows[i]
        if len(row) != ncols:
            free(mat)
            raise ValueError("ragged matrix")
        for j in range(ncols):
            x = row[j] % p
            if x < 0:
                x += p
            mat[i * ncols + j] = x
    return mat


def fp_rank(rows, p):
    """Rank of the matrix over F_p."""
    if not rows or not rows[0]:
        return 0
    if p < 2 or p >= (1 << 31):
        raise ValueError(f"modulus out of range: {p}")
    cdef int nrows = len(rows)
    cdef int ncols = len(rows[0])
    cdef long long* mat = _load(rows, nrows, ncols, p)
    cdef int* pivots = <int*> malloc(nrows * sizeof(int))
    if pivots == NULL:
        free(mat)
        raise MemoryError()
    try:
        return _rref(mat, nrows, ncols, p, pivots)
    finally:
        free(pivots)
        free(mat)


def fp_kernel(rows, p):
    """Basis of the right kernel {v : A v = 0} over F_p, as a list of rows."""
    if not rows:
        return []
    cdef int ncols = len(rows[0])
    if ncols == 0:
        return []
    if p < 2 or p >= (1 << 31):
        raise ValueError(f"modulus out of range: {p}")
    cdef int nrows = len(rows)
    cdef long long* mat = _load(rows, nrows, ncols, p)
    cdef int* pivots = <int*> malloc(nrows * sizeof(int))
    if pivots == NULL:
        free(mat)
        raise MemoryError()
    cdef int rank, r, c, fc
    cdef list basis = [], v
    try:
        rank = _rref(mat, nrows, ncols, p, pivots)
        pivot_set = set()
        for r in range(rank):
            pivot_set.add(pivots[r])
        for fc in range(ncols):
            if fc in pivot_set:
                continue
            v = [0] * ncols
            v[fc] = 1
            for r in range(rank):
                c = pivots[r]
                v[c] = (p - mat[r * ncols + fc]) % p
            basis.append(v)
        return basis
    finally:
        free(pivots)
        free(mat)
