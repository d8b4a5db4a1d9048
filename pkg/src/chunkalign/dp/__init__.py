"""Quadratic DP sentence aligner over a chunk, with a pluggable bead scorer."""

from .engine import (
    BeadSet,
    align_chunk,
    alignment_cost,
    backend,
    band_bounds,
    banded_align,
)
from .scoring import DEFAULT_PRIORS, GaleChurchScorer, gale_church_cost, norm_cdf

__all__ = [
    "BeadSet",
    "DEFAULT_PRIORS",
    "GaleChurchScorer",
    "align_chunk",
    "alignment_cost",
    "backend",
    "band_bounds",
    "banded_align",
    "gale_church_cost",
    "norm_cdf",
]
