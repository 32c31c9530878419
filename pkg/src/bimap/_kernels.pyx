# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled LCS kernels. Same API as ``_kernels_py``."""
from libc.stdlib cimport malloc, free


cdef int _lcs(str a, str b, int* row) noexcept:
    cdef Py_ssize_t n = len(a), m = len(b), i, j
    cdef int diag, up, best
    cdef Py_UCS4 ca
    for j in range(m + 1):
        row[j] = 0
    for i in range(n):
        ca = a[i]
        diag = 0
        for j in range(m):
            up = row[j + 1]
            if ca == b[j]:
                best = diag + 1
            else:
                best = up if up > row[j] else row[j]
            diag = up
            row[j + 1] = best
    return row[m]


def lcs_length(str a, str b):
    cdef Py_ssize_t m = len(b)
    cdef int* row = <int*> malloc((m + 1) * sizeof(int))
    if row == NULL:
        raise MemoryError()
    try:
        return _lcs(a, b, row)
    finally:
        free(row)


cdef bint _exceeds(str a, str b, double threshold, int* row) noexcept:
    cdef Py_ssize_t la = len(a), lb = len(b)
    cdef Py_ssize_t lo = la if la < lb else lb
    cdef Py_ssize_t hi = la if la > lb else lb
    if hi == 0 or lo <= threshold * hi:
        return False
    return _lcs(a, b, row) > threshold * hi


def lcsr_exceeds(str a, str b, double threshold):
    cdef Py_ssize_t m = len(b)
    cdef int* row = <int*> malloc((m + 1) * sizeof(int))
    if row == NULL:
        raise MemoryError()
    try:
        return bool(_exceeds(a, b, threshold, row))
    finally:
        free(row)


def cognate_matrix(list xs, list ys, double threshold):
    """Row-major bytearray ``M[i * len(ys) + j] = lcsr(xs[i], ys[j]) > threshold``."""
    cdef Py_ssize_t nx = len(xs), ny = len(ys), i, j, longest = 0
    cdef str a, b
    for b in ys:
        if len(b) > longest:
            longest = len(b)
    out = bytearray(nx * ny)
    cdef unsigned char[:] view = out
    if nx == 0 or ny == 0:
        return out
    cdef int* row = <int*> malloc((longest + 1) * sizeof(int))
    if row == NULL:
        raise MemoryError()
    try:
        for i in range(nx):
            a = xs[i]
            for j in range(ny):
                b = ys[j]
                if _exceeds(a, b, threshold, row):
                    view[i * ny + j] = 1
    finally:
        free(row)
    return out
