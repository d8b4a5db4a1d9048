"""Pure-Python DP engine: the import-time fallback and the generic path.

Works with any bead scorer through a plain cost callback, so it also
serves scorers the compiled kernel cannot specialize (lexical, custom).
Recurrence, band handling and tie-breaking match the kernel exactly: a
candidate wins only on strictly smaller cost, so the earliest bead type in
the enumeration takes ties.
"""

from __future__ import annotations

import math

import numpy as np

INF = math.inf


def align_rect(n, m, bead_types, cost_fn, lo, hi):
    """Cost-minimal monotone bead path from (0, 0) to (n, m).

    `cost_fn(pi, i, pj, j)` prices the bead consuming source rows [pi, i)
    and target rows [pj, j), in local coordinates. `lo`/`hi` give the
    inclusive per-row column band. Returns (total_cost, step list of bead
    type indices).
    """
    D = np.full((n + 1, m + 1), INF, dtype=np.float64)
    ptr = np.full((n + 1, m + 1), -1, dtype=np.int8)
    D[0, 0] = 0.0
    for i in range(n + 1):
        row = D[i]
        for j in range(int(lo[i]), int(hi[i]) + 1):
            if i == 0 and j == 0:
                continue
            best = INF
            best_k = -1
            for k, (a, b) in enumerate(bead_types):
                pi = i - a
                pj = j - b
                if pi < 0 or pj < 0:
                    continue
                if pj < lo[pi] or pj > hi[pi]:
                    continue
                prev = D[pi, pj]
                if prev == INF:
                    continue
                cand = prev + cost_fn(pi, i, pj, j)
                if cand < best:
                    best = cand
                    best_k = k
            row[j] = best
            ptr[i, j] = best_k
    total = float(D[n, m])
    steps = _traceback(ptr, bead_types, n, m)
    return total, steps


def _traceback(ptr, bead_types, n, m):
    steps = []
    i, j = n, m
    while i > 0 or j > 0:
        k = int(ptr[i, j])
        if k < 0:
            raise RuntimeError("no feasible path through the band")
        steps.append(k)
        a, b = bead_types[k]
        i -= a
        j -= b
    steps.reverse()
    return steps
