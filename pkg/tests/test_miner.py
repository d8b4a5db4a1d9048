import numpy as np
import pytest

from chunkalign.core import Delimiter, ValidationError
from chunkalign.embed import from_array
from chunkalign.miner import (
    Candidate,
    format_delimiters,
    longest_monotone_chain,
    margin_score,
    mine_candidates,
    parse_delimiter_file,
    segment,
    select_hard_delimiters,
)


def identity_matrix(n):
    return from_array(np.eye(n))


# --- margin scoring -------------------------------------------------------

def test_margin_identity_pair_is_one():
    mat = identity_matrix(3)
    assert margin_score(0, 0, mat, mat, 1) == 1.0


def test_margin_zero_row_is_zero():
    src = from_array(np.array([[0.0, 0.0], [1.0, 0.0]]))
    tgt = identity_matrix(2)
    assert margin_score(0, 0, src, tgt, 1) == 0.0


def margin_oracle(i, j, src, tgt, k):
    """Straight-line reimplementation of the ratio margin."""
    cos = float(src.vectors[i] @ tgt.vectors[j])
    fwd = sorted(float(src.vectors[i] @ tgt.vectors[t]) for t in range(tgt.n))[-k:]
    bwd = sorted(float(tgt.vectors[j] @ src.vectors[s]) for s in range(src.n))[-k:]
    denom = sum(fwd) / k / 2 + sum(bwd) / k / 2
    return 0.0 if denom <= 1e-9 else cos / denom


def test_margin_matches_independent_reimplementation():
    rng = np.random.default_rng(0)
    src = from_array(rng.normal(size=(6, 4)))
    tgt = from_array(rng.normal(size=(4, 4)))
    for i in range(6):
        for j in range(4):
            got = margin_score(i, j, src, tgt, 2)
            assert abs(got - margin_oracle(i, j, src, tgt, 2)) < 1e-9


def test_margin_validates_range():
    mat = identity_matrix(3)
    with pytest.raises(ValidationError):
        margin_score(0, 0, mat, mat, 4)
    with pytest.raises(ValidationError):
        margin_score(3, 0, mat, mat, 1)


# --- candidate mining -----------------------------------------------------

def test_mine_identity_rows():
    mat = identity_matrix(3)
    got = mine_candidates(mat, mat, 1, 0.6)
    assert [(c.i, c.j) for c in got] == [(0, 0), (1, 1), (2, 2)]
    assert all(c.cosine == 1.0 for c in got)


def test_mine_applies_cosine_threshold():
    # two near-parallel pairs, one with cosine just below the bar
    src = from_array(np.array([[1.0, 0.0], [0.0, 1.0]]))
    tgt = from_array(np.array([[1.0, 0.0], [0.5, np.sqrt(1 - 0.25)]]))
    got = mine_candidates(src, tgt, 1, 0.6)
    pairs = {(c.i, c.j) for c in got}
    assert (0, 0) in pairs
    assert (1, 1) in pairs  # cos ~ 0.866
    got_high = mine_candidates(src, tgt, 1, 0.9)
    assert {(c.i, c.j) for c in got_high} == {(0, 0)}


def mining_oracle(src, tgt, k, threshold):
    """Enumerate all pairs, apply mutual-best-by-margin plus threshold."""
    margins = np.array(
        [[margin_oracle(i, j, src, tgt, k) for j in range(tgt.n)] for i in range(src.n)]
    )
    out = []
    for i in range(src.n):
        j = int(np.argmax(margins[i]))
        if int(np.argmax(margins[:, j])) != i:
            continue
        if i in src.zero_rows or j in tgt.zero_rows:
            continue
        cos = float(src.vectors[i] @ tgt.vectors[j])
        if cos < threshold:
            continue
        out.append((i, j))
    return out


def test_mine_matches_exhaustive_oracle():
    rng = np.random.default_rng(1)
    for trial in range(20):
        src_raw = rng.normal(size=(8, 5))
        tgt_raw = rng.normal(size=(8, 5))
        if trial % 4 == 0:
            src_raw[rng.integers(0, 8)] = 0.0
        src, tgt = from_array(src_raw), from_array(tgt_raw)
        got = mine_candidates(src, tgt, 3, 0.3)
        assert [(c.i, c.j) for c in got] == mining_oracle(src, tgt, 3, 0.3)


def test_mine_is_injective_both_ways():
    rng = np.random.default_rng(2)
    src = from_array(rng.normal(size=(30, 6)))
    tgt = from_array(rng.normal(size=(25, 6)))
    got = mine_candidates(src, tgt, 4, 0.0)
    assert len({c.i for c in got}) == len(got)
    assert len({c.j for c in got}) == len(got)


def test_mine_rejects_empty_or_bad_k():
    mat = identity_matrix(2)
    with pytest.raises(ValidationError):
        mine_candidates(from_array(np.zeros((0, 2))), mat, 1, 0.5)
    with pytest.raises(ValidationError):
        mine_candidates(mat, mat, 3, 0.5)


# --- longest monotone chain -----------------------------------------------

def test_chain_keeps_monotone_input():
    pairs = [(0, 0), (1, 1), (2, 2)]
    assert longest_monotone_chain(pairs) == pairs


def test_chain_crossing_pair_keeps_replacer():
    assert longest_monotone_chain([(0, 1), (1, 0)]) == [(1, 0)]


def lis_oracle(pairs):
    """O(n^2) longest strictly-increasing-in-j subsequence length."""
    items = sorted(pairs)
    best = [1] * len(items)
    for a in range(len(items)):
        for b in range(a):
            if items[b][1] < items[a][1]:
                best[a] = max(best[a], best[b] + 1)
    return max(best, default=0)


def test_chain_length_matches_quadratic_oracle():
    rng = np.random.default_rng(3)
    for _ in range(30):
        n = int(rng.integers(1, 50))
        i_vals = rng.permutation(200)[:n]
        j_vals = rng.permutation(200)[:n]
        pairs = list(zip(i_vals.tolist(), j_vals.tolist()))
        chain = longest_monotone_chain(pairs)
        assert len(chain) == lis_oracle(pairs)
        assert all(
            p[0] < q[0] and p[1] < q[1] for p, q in zip(chain, chain[1:])
        )


def test_chain_rejects_duplicate_coordinates():
    with pytest.raises(ValidationError):
        longest_monotone_chain([(0, 1), (0, 2)])
    with pytest.raises(ValidationError):
        longest_monotone_chain([(0, 1), (2, 1)])


def test_chain_preserves_candidate_payload():
    cands = [Candidate(0, 0, 0.9, 1.5), Candidate(1, 1, 0.8, 1.2)]
    assert longest_monotone_chain(cands) == cands


# --- hard delimiter selection ----------------------------------------------

def test_single_surrounded_pair():
    got = select_hard_delimiters([(0, 0), (1, 1), (2, 2)], 3, 3)
    assert [(d.src_idx, d.tgt_idx) for d in got] == [(1, 1)]


def test_gap_breaks_both_triples():
    got = select_hard_delimiters([(0, 0), (1, 1), (3, 3), (4, 4)], 6, 6)
    assert got == []


def test_interior_of_a_run():
    chain = [(k, k) for k in range(5)]
    got = select_hard_delimiters(chain, 5, 5)
    assert [(d.src_idx, d.tgt_idx) for d in got] == [(1, 1), (2, 2), (3, 3)]


def test_boundaries_never_qualify():
    chain = [(k, k) for k in range(5)]
    got = select_hard_delimiters(chain, 5, 5)
    idx = {(d.src_idx, d.tgt_idx) for d in got}
    assert (0, 0) not in idx and (4, 4) not in idx


def test_double_application_shrinks_run_by_one_per_end():
    chain = [(k, k) for k in range(8)]
    once = select_hard_delimiters(chain, 8, 8)
    assert len(once) == 6
    twice = select_hard_delimiters([(d.src_idx, d.tgt_idx) for d in once], 8, 8)
    assert len(twice) == 4
    assert {(d.src_idx, d.tgt_idx) for d in twice} <= {
        (d.src_idx, d.tgt_idx) for d in once
    }


# --- segmentation -----------------------------------------------------------

def delim(i, j):
    return Delimiter(i, j, 1.0, 0.0)


def test_segment_single_delimiter():
    fixed, chunks = segment(5, 5, [delim(2, 2)])
    assert [(b.src, b.tgt) for b in fixed] == [((2, 3), (2, 3))]
    assert [(c.src, c.tgt) for c in chunks] == [((0, 2), (0, 2)), ((3, 5), (3, 5))]


def test_segment_no_delimiters_is_one_chunk():
    fixed, chunks = segment(4, 7, [])
    assert fixed == []
    assert [(c.src, c.tgt) for c in chunks] == [((0, 4), (0, 7))]


def test_segment_drops_empty_middle_chunk():
    fixed, chunks = segment(4, 4, [delim(1, 1), delim(2, 2)])
    assert len(fixed) == 2
    assert [(c.src, c.tgt) for c in chunks] == [((0, 1), (0, 1)), ((3, 4), (3, 4))]


def test_segment_coverage_sums():
    rng = np.random.default_rng(4)
    for _ in range(40):
        n, m = int(rng.integers(1, 60)), int(rng.integers(1, 60))
        count = int(rng.integers(0, min(n, m)))
        i_vals = np.sort(rng.permutation(n)[:count])
        j_vals = np.sort(rng.permutation(m)[:count])
        delims = [delim(int(i), int(j)) for i, j in zip(i_vals, j_vals)]
        fixed, chunks = segment(n, m, delims)
        assert sum(c.n_src for c in chunks) + len(fixed) == n
        assert sum(c.n_tgt for c in chunks) + len(fixed) == m


def test_segment_keeps_delimiter_neighbours_in_chunks():
    fixed, chunks = segment(7, 7, [delim(3, 3)])
    spans = [(c.src, c.tgt) for c in chunks]
    assert ((0, 3), (0, 3)) in spans and ((4, 7), (4, 7)) in spans


def test_segment_rejects_non_monotone():
    with pytest.raises(ValidationError):
        segment(5, 5, [delim(3, 3), delim(2, 4)])


# --- delimiter text format ---------------------------------------------------

def test_delimiter_format_round_trip(tmp_path):
    delims = [Delimiter(1, 2, 0.987654, 1.23456789), Delimiter(3, 4, 0.5, 2.0)]
    text = format_delimiters(delims)
    assert text.splitlines()[0] == "1\t2\t0.987654\t1.234568"
    path = tmp_path / "d.tsv"
    path.write_text(text, encoding="utf-8")
    back = parse_delimiter_file(path)
    assert [(d.src_idx, d.tgt_idx) for d in back] == [(1, 2), (3, 4)]
