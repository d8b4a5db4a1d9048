# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled length-based DP over one chunk (full-matrix or banded).

Costs are evaluated inline from cumulative character counts; expressions
mirror scoring.py operation-for-operation so results are bit-identical to
the pure-Python engine. The hot loop runs without the GIL, so chunks can
be aligned in parallel from Python threads.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, exp, fabs, log, sqrt

cnp.import_array()


cdef inline double _gc_cost(double l1, double l2, double nlp) noexcept nogil:
    cdef double mu, z, az, t, poly, tail
    mu = (l1 + l2) / 2.0
    if mu <= 0.0:
        z = 0.0
    else:
        z = (l1 - l2) / sqrt(6.8 * mu)
    az = fabs(z)
    t = 1.0 / (1.0 + 0.2316419 * az)
    poly = ((((1.330274429 * t - 1.821255978) * t + 1.781477937) * t
             - 0.356563782) * t + 0.319381530) * t
    tail = 2.0 * (0.3989423 * exp(-az * az / 2.0) * poly)
    if tail < 1e-12:
        tail = 1e-12
    return -log(tail) + nlp


def align(cnp.int64_t[::1] cum_src, cnp.int64_t[::1] cum_tgt,
          cnp.int32_t[::1] bead_a, cnp.int32_t[::1] bead_b,
          cnp.float64_t[::1] neg_log_prior,
          cnp.int64_t[::1] lo, cnp.int64_t[::1] hi):
    """Cost-minimal bead path; returns (total_cost, bead-type index list).

    cum_src/cum_tgt are local cumulative character counts (length n+1 and
    m+1); lo/hi the inclusive per-row column band. Since every bead cost
    is strictly positive, a predecessor already at or above the row best
    can be skipped without changing which candidate wins.
    """
    cdef Py_ssize_t n = cum_src.shape[0] - 1
    cdef Py_ssize_t m = cum_tgt.shape[0] - 1
    cdef int nb = <int> bead_a.shape[0]
    cdef int k, a, b, bk
    cdef int max_a = 0
    for k in range(nb):
        if bead_a[k] > max_a:
            max_a = bead_a[k]
    cdef Py_ssize_t rows = max_a + 1

    D_arr = np.full((rows, m + 1), np.inf, dtype=np.float64)
    ptr_arr = np.full((n + 1, m + 1), -1, dtype=np.int8)
    cdef cnp.float64_t[:, ::1] D = D_arr
    cdef cnp.int8_t[:, ::1] ptr = ptr_arr

    cdef Py_ssize_t i, j, pi, pj, cur
    cdef double best, prev, cand, total, l1, l2

    with nogil:
        for i in range(n + 1):
            cur = i % rows
            for j in range(m + 1):
                D[cur, j] = INFINITY
            for j in range(lo[i], hi[i] + 1):
                if i == 0 and j == 0:
                    D[cur, 0] = 0.0
                    continue
                best = INFINITY
                bk = -1
                for k in range(nb):
                    a = bead_a[k]
                    b = bead_b[k]
                    pi = i - a
                    pj = j - b
                    if pi < 0 or pj < 0:
                        continue
                    if pj < lo[pi] or pj > hi[pi]:
                        continue
                    prev = D[pi % rows, pj]
                    if prev >= best:
                        continue
                    l1 = <double> (cum_src[i] - cum_src[pi])
                    l2 = <double> (cum_tgt[j] - cum_tgt[pj])
                    cand = prev + _gc_cost(l1, l2, neg_log_prior[k])
                    if cand < best:
                        best = cand
                        bk = k
                D[cur, j] = best
                ptr[i, j] = bk
        total = D[n % rows, m]

    steps = []
    i = n
    j = m
    while i > 0 or j > 0:
        bk = ptr_arr[i, j]
        if bk < 0:
            raise RuntimeError("no feasible path through the band")
        steps.append(bk)
        i -= bead_a[bk]
        j -= bead_b[bk]
    steps.reverse()
    return float(total), steps
