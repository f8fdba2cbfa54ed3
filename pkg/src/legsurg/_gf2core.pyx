# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled GF(2) row-reduction kernel on word-packed matrices.

Mirrors the pure-Python elimination in ``legsurg.gf2`` exactly: pivots
are searched in increasing column order, the first available row is
swapped in, and every other row holding the pivot bit is cleared.
"""

import numpy as np

cimport numpy as cnp


def row_reduce_packed(cnp.uint64_t[:, :] mat, int n_pivot_cols):
    """Fully row-reduce ``mat`` in place; return pivot column indices."""
    cdef Py_ssize_t m = mat.shape[0]
    cdef Py_ssize_t words = mat.shape[1]
    cdef Py_ssize_t r = 0
    cdef Py_ssize_t col, k, w, pivot
    cdef Py_ssize_t word_idx
    cdef cnp.uint64_t bit, tmp
    pivots = []
    for col in range(n_pivot_cols):
        word_idx = col >> 6
        bit = (<cnp.uint64_t> 1) << (col & 63)
        pivot = -1
        for k in range(r, m):
            if mat[k, word_idx] & bit:
                pivot = k
                break
        if pivot < 0:
            continue
        if pivot != r:
            for w in range(words):
                tmp = mat[r, w]
                mat[r, w] = mat[pivot, w]
                mat[pivot, w] = tmp
        for k in range(m):
            if k != r and (mat[k, word_idx] & bit):
                for w in range(words):
                    mat[k, w] ^= mat[r, w]
        pivots.append(col)
        r += 1
        if r == m:
            break
    return pivots
