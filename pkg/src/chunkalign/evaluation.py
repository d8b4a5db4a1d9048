"""Strict alignment metrics and split-point metrics against gold.

A predicted bead is correct only on exact span match with a gold bead;
null beads are removed from both sides first. Ratios with a zero
denominator are defined as 0. Metrics are per document pair.
"""

from __future__ import annotations

from typing import Sequence

from .core import AlignmentSet, Delimiter, ValidationError


def _prf(correct: int, n_test: int, n_gold: int) -> tuple[float, float, float]:
    precision = correct / n_test if n_test else 0.0
    recall = correct / n_gold if n_gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def strict_prf(test: AlignmentSet, gold: AlignmentSet) -> tuple[float, float, float]:
    """Exact-match precision/recall/F1 over non-null beads."""
    if (test.n_src, test.n_tgt) != (gold.n_src, gold.n_tgt):
        raise ValidationError(
            f"document size mismatch: test {test.n_src}x{test.n_tgt} "
            f"vs gold {gold.n_src}x{gold.n_tgt}"
        )
    test_beads = {(b.src, b.tgt) for b in test.beads if not b.is_null}
    gold_beads = {(b.src, b.tgt) for b in gold.beads if not b.is_null}
    return _prf(len(test_beads & gold_beads), len(test_beads), len(gold_beads))


def true_hard_delimiters(gold: AlignmentSet) -> list[Delimiter]:
    """1-to-1 gold beads whose neighbours on both sides are also 1-to-1."""
    beads = gold.beads
    out = []
    for k in range(1, len(beads) - 1):
        if (
            beads[k].bead_type == (1, 1)
            and beads[k - 1].bead_type == (1, 1)
            and beads[k + 1].bead_type == (1, 1)
        ):
            out.append(Delimiter(beads[k].src[0], beads[k].tgt[0], 1.0, 0.0))
    return out


def delimiter_prf(
    found: Sequence[Delimiter], gold: AlignmentSet
) -> tuple[float, float, float]:
    """Exact (i, j) matching of found split points against the gold ones."""
    truth = {(d.src_idx, d.tgt_idx) for d in true_hard_delimiters(gold)}
    mined = {(d.src_idx, d.tgt_idx) for d in found}
    return _prf(len(mined & truth), len(mined), len(truth))
