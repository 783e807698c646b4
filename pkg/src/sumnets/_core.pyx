# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for GF(p) dense linear algebra.

Semantically identical to sumnets._core_py; selected at import time when
available.  All matrices are C-contiguous int64 arrays with canonical
entries in [0, p).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef long long _inv_mod(long long a, long long p):
    # Extended Euclid; a is nonzero mod p, p prime.
    cdef long long t = 0, newt = 1
    cdef long long r = p, newr = a % p
    cdef long long q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def matmul_mod(a_in, b_in, long long p):
    """Product of two int64 matrices with entries reduced mod p."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2] a = np.ascontiguousarray(a_in, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] b = np.ascontiguousarray(b_in, dtype=np.int64)
    cdef Py_ssize_t n = a.shape[0], inner = a.shape[1], mcols = b.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.zeros((n, mcols), dtype=np.int64)
    cdef long long limit = (2**62) // max(1, (p - 1) * (p - 1))
    if limit < 1:
        limit = 1
    cdef Py_ssize_t i, j, k
    cdef long long acc, run
    for i in range(n):
        for j in range(mcols):
            acc = 0
            run = 0
            for k in range(inner):
                acc += a[i, k] * b[k, j]
                run += 1
                if run == limit:
                    acc %= p
                    run = 0
            out[i, j] = acc % p
    return out


def rref_mod(cnp.ndarray[cnp.int64_t, ndim=2] m, long long p):
    """Reduced row echelon form in place; returns (rank, pivot columns)."""
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k
    cdef long long inv, factor, tmp
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        i = -1
        for k in range(r, rows):
            if m[k, c] != 0:
                i = k
                break
        if i < 0:
            continue
        if i != r:
            for j in range(cols):
                tmp = m[r, j]
                m[r, j] = m[i, j]
                m[i, j] = tmp
        inv = _inv_mod(m[r, c], p)
        if inv != 1:
            for j in range(cols):
                m[r, j] = (m[r, j] * inv) % p
        for k in range(rows):
            if k == r:
                continue
            factor = m[k, c]
            if factor == 0:
                continue
            for j in range(cols):
                m[k, j] = (m[k, j] - factor * m[r, j]) % p
                if m[k, j] < 0:
                    m[k, j] += p
        pivots.append(c)
        r += 1
    return r, pivots
