"""Divide-and-conquer orchestration: mine, split, align chunks, merge.

The global pass mines hard delimiters and fixes them as 1-to-1 beads.
Chunks small enough go straight to full DP. Oversized chunks are re-mined
with a search scope restricted to their own rows: fresh delimiters split
them recursively; otherwise the (weaker) monotone candidate chain guides a
banded DP, and with no candidates at all the chunk falls back to full DP.

Chunks are independent sub-problems, so they may be aligned by a thread
pool; work units are fixed before scheduling and merged by document
position, which makes the output identical for any worker count. The
compiled DP kernel releases the GIL, so threads give real parallelism.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .core import AlignmentSet, Bead, Chunk, ValidationError, validate_alignment_set
from .dp import BeadSet, align_chunk, banded_align
from .embed import EmbeddingMatrix
from .miner import (
    longest_monotone_chain,
    mine_candidates,
    segment,
    select_hard_delimiters,
)


@dataclass(frozen=True)
class DacConfig:
    cos_threshold: float = 0.6
    k_nn: int = 4
    max_chunk: int = 200
    band: int = 10
    max_depth: int = 3
    jobs: int = 1
    bead_set: BeadSet = field(default_factory=BeadSet.default)

    def __post_init__(self):
        if self.k_nn < 1:
            raise ValidationError(f"k_nn must be >= 1, got {self.k_nn}")
        if self.max_chunk < 1:
            raise ValidationError(f"max_chunk must be >= 1, got {self.max_chunk}")
        if self.band < 0:
            raise ValidationError(f"band must be >= 0, got {self.band}")
        if self.max_depth < 1:
            raise ValidationError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.jobs < 1:
            raise ValidationError(f"jobs must be >= 1, got {self.jobs}")


@dataclass
class DacStats:
    """Phase accounting for one alignment run."""

    n_delimiters: int = 0
    n_chunks: int = 0
    mine_seconds: float = 0.0
    dp_seconds: float = 0.0


def _mine_chain(src_emb: EmbeddingMatrix, tgt_emb: EmbeddingMatrix, config: DacConfig):
    """Candidate chain for a region; empty when a side is too small."""
    k_nn = min(config.k_nn, src_emb.n, tgt_emb.n)
    if k_nn < 1:
        return []
    candidates = mine_candidates(src_emb, tgt_emb, k_nn, config.cos_threshold)
    return longest_monotone_chain(candidates)


def _bead_key(bead: Bead):
    return (bead.src[0], bead.tgt[0])


def merge(fixed_beads, chunk_alignments, n_src: int, n_tgt: int) -> AlignmentSet:
    """Concatenate fixed beads and per-chunk alignments in document order.

    Raises when the pieces do not tile both documents exactly, naming the
    first gap or overlap.
    """
    beads = list(fixed_beads)
    for piece in chunk_alignments:
        beads.extend(piece)
    beads.sort(key=_bead_key)
    alignment = AlignmentSet(tuple(beads), n_src, n_tgt)
    problem = validate_alignment_set(alignment)
    if problem is not None:
        raise ValidationError(f"coverage violation: {problem}")
    return alignment


def recurse_or_band(
    chunk: Chunk,
    src_emb: EmbeddingMatrix,
    tgt_emb: EmbeddingMatrix,
    scorer,
    config: DacConfig,
    depth: int,
):
    """Align an oversized chunk; returns (beads, mine_seconds, dp_seconds)."""
    s0, _ = chunk.src
    t0, _ = chunk.tgt
    local_src = src_emb.slice(*chunk.src)
    local_tgt = tgt_emb.slice(*chunk.tgt)

    t_start = time.perf_counter()
    chain = (
        _mine_chain(local_src, local_tgt, config)
        if chunk.n_src > 0 and chunk.n_tgt > 0
        else []
    )
    delimiters = select_hard_delimiters(chain, chunk.n_src, chunk.n_tgt)
    mine_s = time.perf_counter() - t_start

    if delimiters and depth < config.max_depth:
        fixed_local, sub_local = segment(chunk.n_src, chunk.n_tgt, delimiters)
        fixed = [
            Bead((b.src[0] + s0, b.src[1] + s0), (b.tgt[0] + t0, b.tgt[1] + t0))
            for b in fixed_local
        ]
        pieces = [fixed]
        dp_s = 0.0
        for sub in sub_local:
            sub_doc = Chunk(
                (sub.src[0] + s0, sub.src[1] + s0), (sub.tgt[0] + t0, sub.tgt[1] + t0)
            )
            beads, sub_mine, sub_dp = _align_one(
                sub_doc, src_emb, tgt_emb, scorer, config, depth + 1
            )
            pieces.append(beads)
            mine_s += sub_mine
            dp_s += sub_dp
        merged = [b for piece in pieces for b in piece]
        merged.sort(key=_bead_key)
        return merged, mine_s, dp_s

    t_start = time.perf_counter()
    if chain:
        anchors = [(c.i + s0, c.j + t0) for c in chain]
        beads = banded_align(chunk, scorer, config.bead_set, anchors, config.band)
    else:
        beads = align_chunk(chunk, scorer, config.bead_set)
    return beads, mine_s, time.perf_counter() - t_start


def _align_one(chunk, src_emb, tgt_emb, scorer, config, depth):
    small = max(chunk.n_src, chunk.n_tgt) <= config.max_chunk
    if small or chunk.n_src == 0 or chunk.n_tgt == 0:
        t_start = time.perf_counter()
        beads = align_chunk(chunk, scorer, config.bead_set)
        return beads, 0.0, time.perf_counter() - t_start
    return recurse_or_band(chunk, src_emb, tgt_emb, scorer, config, depth)


def dac_align_stats(
    src_sentences,
    tgt_sentences,
    src_emb: EmbeddingMatrix,
    tgt_emb: EmbeddingMatrix,
    scorer,
    config: DacConfig | None = None,
) -> tuple[AlignmentSet, DacStats]:
    """dac_align plus per-phase timing and chunk counts."""
    config = config or DacConfig()
    n_src, n_tgt = len(src_sentences), len(tgt_sentences)
    if src_emb.n != n_src:
        raise ValidationError(
            f"source embeddings have {src_emb.n} rows but document has {n_src} sentences"
        )
    if tgt_emb.n != n_tgt:
        raise ValidationError(
            f"target embeddings have {tgt_emb.n} rows but document has {n_tgt} sentences"
        )
    stats = DacStats()
    if n_src == 0 and n_tgt == 0:
        return AlignmentSet((), 0, 0), stats

    t_start = time.perf_counter()
    chain = _mine_chain(src_emb, tgt_emb, config) if n_src and n_tgt else []
    delimiters = select_hard_delimiters(chain, n_src, n_tgt)
    stats.mine_seconds += time.perf_counter() - t_start

    fixed, chunks = segment(n_src, n_tgt, delimiters)
    stats.n_delimiters = len(delimiters)
    stats.n_chunks = len(chunks)

    def task(chunk):
        return _align_one(chunk, src_emb, tgt_emb, scorer, config, depth=1)

    if config.jobs > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(task, chunks))
    else:
        results = [task(chunk) for chunk in chunks]

    for _, mine_s, dp_s in results:
        stats.mine_seconds += mine_s
        stats.dp_seconds += dp_s
    alignment = merge(fixed, (beads for beads, _, _ in results), n_src, n_tgt)
    return alignment, stats


def dac_align(
    src_sentences,
    tgt_sentences,
    src_emb: EmbeddingMatrix,
    tgt_emb: EmbeddingMatrix,
    scorer,
    config: DacConfig | None = None,
) -> AlignmentSet:
    """Align a document pair by mining split points and aligning chunks.

    The result is a valid exact partition of both documents; mined hard
    delimiters appear as 1-to-1 beads. Output is deterministic and
    independent of config.jobs.
    """
    return dac_align_stats(
        src_sentences, tgt_sentences, src_emb, tgt_emb, scorer, config
    )[0]


def whole_document_align(src_sentences, tgt_sentences, scorer, bead_set=None) -> AlignmentSet:
    """Single full-DP pass over the entire pair (the no-mining baseline)."""
    n_src, n_tgt = len(src_sentences), len(tgt_sentences)
    if n_src == 0 and n_tgt == 0:
        return AlignmentSet((), 0, 0)
    beads = align_chunk(Chunk((0, n_src), (0, n_tgt)), scorer, bead_set or BeadSet.default())
    alignment = AlignmentSet(tuple(beads), n_src, n_tgt)
    problem = validate_alignment_set(alignment)
    if problem is not None:
        raise ValidationError(f"coverage violation: {problem}")
    return alignment


__all__ = [
    "DacConfig",
    "DacStats",
    "dac_align",
    "dac_align_stats",
    "merge",
    "recurse_or_band",
    "whole_document_align",
]
