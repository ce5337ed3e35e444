# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled finite-field kernels.

Bit-identical twin of ``pykernels``; see that module for the semantics
contract (pivot order, rejection rule, canonical solutions).
"""

import numpy as np

cimport cython
from libc.stdint cimport int32_t, int64_t, uint16_t, uint32_t

BACKEND_NAME = "cython"


class StreamExhausted(Exception):
    """Word stream ran out before the shuffle finished."""


def gf_mul_vec(a, b, const int32_t[::1] log, const uint16_t[::1] exp):
    scalar = np.ndim(a) == 0 and np.ndim(b) == 0
    shape = np.broadcast_shapes(np.shape(a), np.shape(b))
    a_arr = np.ascontiguousarray(np.broadcast_to(np.asarray(a, dtype=np.uint16), shape))
    b_arr = np.ascontiguousarray(np.broadcast_to(np.asarray(b, dtype=np.uint16), shape))
    flat_a = a_arr.ravel()
    flat_b = b_arr.ravel()
    out = np.empty_like(flat_a)
    _mul_into(flat_a, flat_b, out, log, exp)
    if scalar:
        return out[0]
    return out.reshape(shape)


cdef void _mul_into(const uint16_t[::1] a, const uint16_t[::1] b, uint16_t[::1] out,
                    const int32_t[::1] log, const uint16_t[::1] exp) noexcept:
    cdef Py_ssize_t i, n = a.shape[0]
    cdef uint16_t x, y
    for i in range(n):
        x = a[i]
        y = b[i]
        out[i] = 0 if (x == 0 or y == 0) else exp[log[x] + log[y]]


def poly_eval(coeffs, xs, const int32_t[::1] log, const uint16_t[::1] exp):
    cdef const uint16_t[::1] cs = np.ascontiguousarray(coeffs, dtype=np.uint16)
    cdef const uint16_t[::1] points = np.ascontiguousarray(xs, dtype=np.uint16)
    out = np.zeros(points.shape[0], dtype=np.uint16)
    cdef uint16_t[::1] acc = out
    cdef Py_ssize_t i, j, n = points.shape[0], k = cs.shape[0]
    cdef uint16_t v, x
    for i in range(n):
        x = points[i]
        v = 0
        for j in range(k - 1, -1, -1):
            if v != 0 and x != 0:
                v = exp[log[v] + log[x]]
            else:
                v = 0
            v ^= cs[j]
        acc[i] = v
    return out


cdef list _rref(uint16_t[:, ::1] m, const int32_t[::1] log, const uint16_t[::1] exp):
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t rank = 0, c, r, i, j, qm1 = exp.shape[0] // 2
    cdef uint16_t inv, factor, piv, tmp
    cdef int32_t lf
    pivots = []
    for c in range(cols):
        if rank == rows:
            break
        r = -1
        for i in range(rank, rows):
            if m[i, c] != 0:
                r = i
                break
        if r < 0:
            continue
        if r != rank:
            for j in range(cols):
                tmp = m[rank, j]
                m[rank, j] = m[r, j]
                m[r, j] = tmp
        inv = exp[qm1 - log[m[rank, c]]]
        if inv != 1:
            for j in range(cols):
                piv = m[rank, j]
                if piv != 0:
                    m[rank, j] = exp[log[piv] + log[inv]]
        for i in range(rows):
            if i == rank:
                continue
            factor = m[i, c]
            if factor == 0:
                continue
            lf = log[factor]
            for j in range(cols):
                piv = m[rank, j]
                if piv != 0:
                    m[i, j] ^= exp[lf + log[piv]]
        pivots.append(c)
        rank += 1
    return pivots


def gauss_solve(a, b, const int32_t[::1] log, const uint16_t[::1] exp):
    a_arr = np.ascontiguousarray(a, dtype=np.uint16)
    b_arr = np.asarray(b, dtype=np.uint16)
    cdef Py_ssize_t rows = a_arr.shape[0], cols = a_arr.shape[1]
    m_arr = np.empty((rows, cols + 1), dtype=np.uint16)
    m_arr[:, :cols] = a_arr
    m_arr[:, cols] = b_arr
    cdef uint16_t[:, ::1] m = m_arr
    pivots = _rref(m, log, exp)
    if pivots and pivots[len(pivots) - 1] == cols:
        return None
    x = np.zeros(cols, dtype=np.uint16)
    for r, c in enumerate(pivots):
        x[c] = m_arr[r, cols]
    return x


def gauss_nullvec(a, const int32_t[::1] log, const uint16_t[::1] exp):
    m_arr = np.ascontiguousarray(a, dtype=np.uint16).copy()
    cdef uint16_t[:, ::1] m = m_arr
    cdef Py_ssize_t cols = m_arr.shape[1]
    pivots = _rref(m, log, exp)
    pivot_set = set(pivots)
    free = -1
    for c in range(cols):
        if c not in pivot_set:
            free = c
            break
    if free < 0:
        return None
    x = np.zeros(cols, dtype=np.uint16)
    x[free] = 1
    for r, c in enumerate(pivots):
        x[c] = m_arr[r, free]
    return x


def fisher_yates_subset(words, Py_ssize_t n, Py_ssize_t t):
    cdef const uint32_t[::1] w = np.ascontiguousarray(words, dtype=np.uint32)
    perm_arr = np.arange(n, dtype=np.int64)
    cdef int64_t[::1] perm = perm_arr
    cdef Py_ssize_t pos = 0, limit = w.shape[0], i, j, span, b
    cdef uint32_t mask, draw
    cdef int64_t tmp
    for i in range(t):
        span = n - i
        if span > 1:
            b = 0
            while (span - 1) >> b:
                b += 1
            mask = (1u << b) - 1
        else:
            mask = 0
        while True:
            if pos >= limit:
                raise StreamExhausted
            draw = w[pos] & mask
            pos += 1
            if draw < <uint32_t> span:
                break
        j = i + draw
        tmp = perm[i]
        perm[i] = perm[j]
        perm[j] = tmp
    return np.sort(perm_arr[:t])
