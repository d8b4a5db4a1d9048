"""Lexical bead scorer backed by an external word-translation table.

The table maps (source token, target token) to a probability in (0, 1];
unseen pairs fall back to a smoothing floor. The bead cost is a
bag-of-words target-given-source likelihood with a NULL slot and no
length term:

    cost = -log(prior(type))
           - sum_t log( (floor + sum_s p(t|s)) / (|src tokens| + 1) )

Null beads pay only the prior. Tokenization is whitespace splitting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import ValidationError
from .dp.scoring import DEFAULT_PRIORS

DEFAULT_FLOOR = 1e-6


@dataclass(frozen=True)
class TTable:
    """Word-translation probabilities with a smoothing floor for misses."""

    entries: dict[tuple[str, str], float] = field(default_factory=dict)
    floor: float = DEFAULT_FLOOR

    def __post_init__(self):
        if self.floor <= 0.0:
            raise ValidationError(f"floor must be positive, got {self.floor}")

    def prob(self, src_token: str, tgt_token: str) -> float:
        return self.entries.get((src_token, tgt_token), self.floor)


def load_ttable(path, floor: float = DEFAULT_FLOOR) -> TTable:
    """Parse `src tgt prob` lines; later duplicates overwrite earlier ones."""
    entries: dict[tuple[str, str], float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValidationError(f"{path}:{lineno}: expected 3 fields, got {len(parts)}")
            try:
                prob = float(parts[2])
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: malformed probability {parts[2]!r}") from None
            if not 0.0 < prob <= 1.0:
                raise ValidationError(f"{path}:{lineno}: probability {prob} outside (0, 1]")
            entries[(parts[0], parts[1])] = prob
    return TTable(entries, floor)


def lexical_bead_cost(src_tokens, tgt_tokens, table: TTable, priors=None) -> float:
    """Cost of a bead given per-sentence token lists for each side."""
    prior_table = DEFAULT_PRIORS if priors is None else priors
    bead_type = (len(src_tokens), len(tgt_tokens))
    try:
        prior = prior_table[bead_type]
    except KeyError:
        raise ValidationError(f"unknown bead type {bead_type}") from None
    cost = -math.log(prior)
    if bead_type[0] == 0 or bead_type[1] == 0:
        return cost
    src_flat = [tok for sent in src_tokens for tok in sent]
    denom = len(src_flat) + 1
    for sent in tgt_tokens:
        for t in sent:
            mass = table.floor
            for s in src_flat:
                mass += table.prob(s, t)
            cost -= math.log(mass / denom)
    return cost


class LexicalScorer:
    """Bead scorer over two tokenized documents using a TTable."""

    def __init__(self, src_sentences, tgt_sentences, table: TTable, priors=None):
        self._src = [s.split() for s in src_sentences]
        self._tgt = [s.split() for s in tgt_sentences]
        self._table = table
        self._priors = DEFAULT_PRIORS if priors is None else priors

    def bead_cost(self, i0: int, i1: int, j0: int, j1: int) -> float:
        return lexical_bead_cost(
            self._src[i0:i1], self._tgt[j0:j1], self._table, self._priors
        )
