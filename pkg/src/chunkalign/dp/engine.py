"""Chunk alignment: full-matrix and anchor-banded DP with backend dispatch.

The compiled kernel is used for length-based scoring when the extension
built; anything else (lexical or custom scorers, CHUNKALIGN_PURE=1, no
compiler at install time) runs the pure-Python engine. Both produce
identical output; `backend()` reports which one is active.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from ..core import Bead, Chunk, ValidationError
from . import _pydp
from .scoring import GaleChurchScorer

try:
    from . import _gc_kernel
except ImportError:
    _gc_kernel = None

_FORCE_PURE = os.environ.get("CHUNKALIGN_PURE", "") not in ("", "0")

_DEFAULT_TYPES = ((1, 1), (1, 0), (0, 1), (1, 2), (2, 1), (2, 2))
_EXTENDED_TYPES = _DEFAULT_TYPES + ((1, 3), (3, 1), (1, 4), (4, 1), (1, 5), (5, 1))


def backend() -> str:
    """'compiled' when the length-based kernel is active, else 'python'."""
    return "compiled" if (_gc_kernel is not None and not _FORCE_PURE) else "python"


@dataclass(frozen=True)
class BeadSet:
    """Allowed bead types, in the fixed order used to break cost ties."""

    types: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for a, b in self.types:
            if a < 0 or b < 0 or (a == 0 and b == 0):
                raise ValidationError(f"bad bead type {(a, b)}")
            if (a, b) in seen:
                raise ValidationError(f"duplicate bead type {(a, b)}")
            seen.add((a, b))
        for required in ((1, 1), (1, 0), (0, 1)):
            if required not in seen:
                raise ValidationError(f"bead set must contain {required}")

    def __iter__(self):
        return iter(self.types)

    def __contains__(self, bead_type):
        return bead_type in self.types

    def __len__(self):
        return len(self.types)

    @classmethod
    def default(cls) -> "BeadSet":
        return cls(_DEFAULT_TYPES)

    @classmethod
    def extended(cls) -> "BeadSet":
        return cls(_EXTENDED_TYPES)


def band_bounds(n: int, m: int, anchors, band: int):
    """Per-row inclusive column bounds around the anchor path.

    The guide path is the piecewise-linear polyline through (0,0), each
    anchor cell (p,q) and (p+1,q+1), and (n,m); a cell is in the band when
    its Chebyshev distance to the polyline is <= band. A final backward
    pass widens rows just enough that a monotone path always fits, so the
    DP can never strand.
    """
    if band < 0:
        raise ValidationError(f"band must be nonnegative, got {band}")
    pts_s = [0.0]
    pts_t = [0.0]
    for p, q in anchors:
        pts_s.extend((float(p), float(p + 1)))
        pts_t.extend((float(q), float(q + 1)))
    pts_s.append(float(n))
    pts_t.append(float(m))
    ss = np.asarray(pts_s)
    ts = np.asarray(pts_t)

    def t_range(s: float) -> tuple[float, float]:
        left = int(np.searchsorted(ss, s, "left"))
        right = int(np.searchsorted(ss, s, "right"))
        if left < right:  # s hits polyline points (maybe a vertical run)
            return float(ts[left]), float(ts[right - 1])
        frac = (s - ss[left - 1]) / (ss[left] - ss[left - 1])
        t = float(ts[left - 1] + frac * (ts[left] - ts[left - 1]))
        return t, t

    lo = np.empty(n + 1, dtype=np.int64)
    hi = np.empty(n + 1, dtype=np.int64)
    for i in range(n + 1):
        tmin, _ = t_range(max(0.0, float(i - band)))
        _, tmax = t_range(min(float(n), float(i + band)))
        lo[i] = max(0, int(math.ceil(tmin - band - 1e-9)))
        hi[i] = min(m, int(math.floor(tmax + band + 1e-9)))
    lo[0] = 0
    hi[n] = m
    for i in range(n - 1, -1, -1):
        if hi[i] < lo[i + 1]:
            hi[i] = lo[i + 1]
    return lo, hi


def _full_bounds(n: int, m: int):
    return np.zeros(n + 1, dtype=np.int64), np.full(n + 1, m, dtype=np.int64)


def _run(chunk: Chunk, scorer, beads: BeadSet, lo, hi):
    s0, s1 = chunk.src
    t0, t1 = chunk.tgt
    if backend() == "compiled" and isinstance(scorer, GaleChurchScorer):
        cum_src = np.ascontiguousarray(scorer.src_cum[s0 : s1 + 1] - scorer.src_cum[s0])
        cum_tgt = np.ascontiguousarray(scorer.tgt_cum[t0 : t1 + 1] - scorer.tgt_cum[t0])
        bead_a = np.array([a for a, _ in beads], dtype=np.int32)
        bead_b = np.array([b for _, b in beads], dtype=np.int32)
        nlp = scorer.neg_log_priors(beads.types)
        total, steps = _gc_kernel.align(cum_src, cum_tgt, bead_a, bead_b, nlp, lo, hi)
    else:
        def cost_fn(pi, i, pj, j):
            return scorer.bead_cost(s0 + pi, s0 + i, t0 + pj, t0 + j)

        total, steps = _pydp.align_rect(s1 - s0, t1 - t0, beads.types, cost_fn, lo, hi)
    out = []
    i, j = s0, t0
    for k in steps:
        a, b = beads.types[k]
        out.append(Bead((i, i + a), (j, j + b)))
        i += a
        j += b
    return total, out


def align_chunk(chunk: Chunk, scorer, beads: BeadSet | None = None) -> list[Bead]:
    """Globally cost-minimal bead sequence covering the chunk exactly.

    Returned beads are in document coordinates and tile the chunk's source
    and target ranges in order.
    """
    beads = beads or BeadSet.default()
    lo, hi = _full_bounds(chunk.n_src, chunk.n_tgt)
    return _run(chunk, scorer, beads, lo, hi)[1]


def banded_align(
    chunk: Chunk, scorer, beads: BeadSet | None, anchors, band: int
) -> list[Bead]:
    """align_chunk restricted to cells near the path through the anchors.

    Anchors are (src_idx, tgt_idx) pairs in document coordinates, strictly
    increasing on both sides and inside the chunk. With a band covering
    the whole matrix this equals align_chunk.
    """
    beads = beads or BeadSet.default()
    s0, _ = chunk.src
    t0, _ = chunk.tgt
    local = []
    prev = (-1, -1)
    for i, j in anchors:
        p, q = i - s0, j - t0
        if not (0 <= p < chunk.n_src and 0 <= q < chunk.n_tgt):
            raise ValidationError(f"anchor ({i}, {j}) outside chunk")
        if p <= prev[0] or q <= prev[1]:
            raise ValidationError(f"anchor ({i}, {j}) not strictly monotone")
        prev = (p, q)
        local.append((p, q))
    lo, hi = band_bounds(chunk.n_src, chunk.n_tgt, local, band)
    return _run(chunk, scorer, beads, lo, hi)[1]


def alignment_cost(beads, scorer) -> float:
    """Total scorer cost of a bead sequence (same fold order as the DP)."""
    total = 0.0
    for bead in beads:
        total += scorer.bead_cost(bead.src[0], bead.src[1], bead.tgt[0], bead.tgt[1])
    return total
