"""Mining hard delimiters from bilingual sentence embeddings.

Pipeline: score all cross-document pairs with a ratio margin (cosine
normalized by each side's mean similarity to its k nearest neighbours,
which penalizes hub sentences), keep mutual-best pairs above a cosine
threshold, thin them to the longest chain that is strictly increasing on
both sides, then keep only pairs whose diagonal neighbours are also in the
chain. Surviving pairs are safe 1-to-1 split points; everything between
two consecutive split points becomes an independently alignable chunk.

Every tie (argmax, patience piles) breaks toward the smaller index, so the
whole pipeline is deterministic.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .core import Bead, Chunk, Delimiter, ValidationError
from .embed import EmbeddingMatrix, knn, similarity_matrix

_DENOM_FLOOR = 1e-9
_BLOCK_ROWS = 1024


class Candidate(NamedTuple):
    """A mined 1-to-1 pair with its similarity evidence."""

    i: int
    j: int
    cosine: float
    margin: float


def margin_score(
    i: int, j: int, src: EmbeddingMatrix, tgt: EmbeddingMatrix, k_nn: int
) -> float:
    """Ratio margin of pair (i, j): cosine over mean neighbourhood cosine.

    Returns 0 when the denominator degenerates (e.g. zero embeddings).
    """
    if not 1 <= k_nn <= min(src.n, tgt.n):
        raise ValidationError(f"k_nn={k_nn} out of range 1..{min(src.n, tgt.n)}")
    if not (0 <= i < src.n and 0 <= j < tgt.n):
        raise ValidationError(f"pair ({i}, {j}) out of range")
    cos_ij = float(src.vectors[i] @ tgt.vectors[j])
    fwd = np.sort(src.vectors[i] @ tgt.vectors.T)[-k_nn:]
    bwd = np.sort(tgt.vectors[j] @ src.vectors.T)[-k_nn:]
    denom = float(fwd.mean()) / 2.0 + float(bwd.mean()) / 2.0
    if denom <= _DENOM_FLOOR:
        return 0.0
    return cos_ij / denom


def _topk_means(src: EmbeddingMatrix, tgt: EmbeddingMatrix, k: int):
    """Mean of the k largest cosines per source row and per target row."""
    n, m = src.n, tgt.n
    row_means = np.empty(n, dtype=np.float64)
    col_top = np.full((0, m), -np.inf)
    for start in range(0, n, _BLOCK_ROWS):
        stop = min(start + _BLOCK_ROWS, n)
        sims = src.vectors[start:stop] @ tgt.vectors.T
        row_means[start:stop] = np.sort(sims, axis=1)[:, -k:].mean(axis=1)
        stacked = np.vstack([col_top, sims])
        if stacked.shape[0] > k:
            stacked = np.partition(stacked, -k, axis=0)[-k:]
        col_top = stacked
    return row_means, col_top.mean(axis=0)


def mine_candidates(
    src: EmbeddingMatrix, tgt: EmbeddingMatrix, k_nn: int, cos_threshold: float
) -> list[Candidate]:
    """Mutual-best pairs by ratio margin, filtered by a cosine threshold.

    A pair survives iff each side is the other's margin argmax (ties to the
    smaller index) and its cosine clears the threshold. Zero rows never
    survive. Output is sorted by source index; each source and each target
    index appears at most once.
    """
    if src.n == 0 or tgt.n == 0:
        raise ValidationError("cannot mine from an empty embedding matrix")
    if not 1 <= k_nn <= min(src.n, tgt.n):
        raise ValidationError(f"k_nn={k_nn} out of range 1..{min(src.n, tgt.n)}")

    row_mean, col_mean = _topk_means(src, tgt, k_nn)
    n, m = src.n, tgt.n
    row_best = np.empty(n, dtype=np.int64)
    row_best_margin = np.empty(n, dtype=np.float64)
    row_best_cos = np.empty(n, dtype=np.float64)
    col_best = np.full(m, -1, dtype=np.int64)
    col_best_margin = np.full(m, -np.inf)
    for start in range(0, n, _BLOCK_ROWS):
        stop = min(start + _BLOCK_ROWS, n)
        sims = src.vectors[start:stop] @ tgt.vectors.T
        denom = (row_mean[start:stop, None] + col_mean[None, :]) / 2.0
        margins = np.where(denom <= _DENOM_FLOOR, 0.0, sims / np.maximum(denom, _DENOM_FLOOR))
        best = margins.argmax(axis=1)
        rows = np.arange(stop - start)
        row_best[start:stop] = best
        row_best_margin[start:stop] = margins[rows, best]
        row_best_cos[start:stop] = sims[rows, best]
        blk_max = margins.max(axis=0)
        blk_arg = margins.argmax(axis=0) + start
        better = blk_max > col_best_margin  # strict: earlier block wins ties
        col_best[better] = blk_arg[better]
        col_best_margin[better] = blk_max[better]

    out = []
    for i in range(n):
        j = int(row_best[i])
        if col_best[j] != i:
            continue
        if i in src.zero_rows or j in tgt.zero_rows:
            continue
        if row_best_cos[i] < cos_threshold:
            continue
        out.append(Candidate(i, j, float(row_best_cos[i]), float(row_best_margin[i])))
    return out


def longest_monotone_chain(pairs: Sequence) -> list:
    """Longest subsequence strictly increasing in both coordinates.

    Accepts (i, j) or (i, j, ...) tuples with pairwise-distinct i and j;
    patience piles with binary search, each pile keeping its most recent
    element, so the result is a pure function of the input.
    """
    items = sorted(pairs, key=lambda p: (p[0], p[1]))
    if len({p[0] for p in items}) != len(items) or len({p[1] for p in items}) != len(items):
        raise ValidationError("chain input must have distinct i's and distinct j's")
    from bisect import bisect_left

    tails: list[int] = []  # smallest current tail j per pile
    tops: list[int] = []  # item index atop each pile
    pred = [-1] * len(items)
    for idx, item in enumerate(items):
        pos = bisect_left(tails, item[1])
        if pos == len(tails):
            tails.append(item[1])
            tops.append(idx)
        else:
            tails[pos] = item[1]
            tops[pos] = idx
        pred[idx] = tops[pos - 1] if pos > 0 else -1
    if not tops:
        return []
    chain = []
    at = tops[-1]
    while at != -1:
        chain.append(items[at])
        at = pred[at]
    chain.reverse()
    return chain


def select_hard_delimiters(chain: Sequence, n_src: int, n_tgt: int) -> list[Delimiter]:
    """Keep chain pairs whose diagonal neighbours are also in the chain.

    (i, j) qualifies iff (i-1, j-1) and (i+1, j+1) are both present, which
    automatically excludes document-boundary pairs.
    """
    members = {(p[0], p[1]) for p in chain}
    out = []
    for p in chain:
        i, j = p[0], p[1]
        if not (0 <= i < n_src and 0 <= j < n_tgt):
            raise ValidationError(f"chain pair ({i}, {j}) out of range")
        if (i - 1, j - 1) in members and (i + 1, j + 1) in members:
            cos = p[2] if len(p) > 2 else 1.0
            margin = p[3] if len(p) > 3 else 0.0
            out.append(Delimiter(i, j, cos, margin))
    return out


def segment(
    n_src: int, n_tgt: int, delimiters: Sequence[Delimiter]
) -> tuple[list[Bead], list[Chunk]]:
    """Split both documents at the delimiters.

    Each delimiter becomes a fixed 1-to-1 bead; the maximal ranges strictly
    between consecutive delimiters (plus the flanks) become chunks. Chunks
    empty on both sides are dropped. Fixed beads plus chunks cover both
    documents exactly.
    """
    fixed = []
    chunks = []
    prev_i, prev_j = 0, 0
    for k, d in enumerate(delimiters):
        if d.src_idx < prev_i or d.tgt_idx < prev_j:
            raise ValidationError(f"delimiter {k} not monotone")
        if d.src_idx >= n_src or d.tgt_idx >= n_tgt:
            raise ValidationError(f"delimiter {k} out of range")
        if d.src_idx > prev_i or d.tgt_idx > prev_j:
            chunks.append(Chunk((prev_i, d.src_idx), (prev_j, d.tgt_idx)))
        fixed.append(Bead((d.src_idx, d.src_idx + 1), (d.tgt_idx, d.tgt_idx + 1)))
        prev_i, prev_j = d.src_idx + 1, d.tgt_idx + 1
    if prev_i < n_src or prev_j < n_tgt:
        chunks.append(Chunk((prev_i, n_src), (prev_j, n_tgt)))
    return fixed, chunks


def format_delimiters(delimiters: Sequence[Delimiter]) -> str:
    """One delimiter per line: i, j, cosine, margin (6-decimal scores)."""
    return "".join(
        f"{d.src_idx}\t{d.tgt_idx}\t{d.cosine:.6f}\t{d.margin:.6f}\n" for d in delimiters
    )


def parse_delimiter_file(path) -> list[Delimiter]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ValidationError(f"{path}:{lineno}: expected 4 tab-separated fields")
            try:
                out.append(
                    Delimiter(int(parts[0]), int(parts[1]), float(parts[2]), float(parts[3]))
                )
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: malformed delimiter line") from None
    return out
