"""chunkalign: divide-and-conquer sentence alignment.

Mines high-confidence 1-to-1 split points from bilingual sentence
embeddings, cuts the pair into independently alignable chunks, aligns the
chunks with a quadratic DP (compiled kernel when available), and merges.
Also ships a Monte Carlo simulator for expected chunk-size statistics and
a strict precision/recall/F1 evaluator.
"""

from .core import (
    AlignmentSet,
    Bead,
    Chunk,
    Delimiter,
    ValidationError,
    read_alignment_file,
    serialize_alignment,
    validate_alignment_set,
    validate_beads,
    write_alignment_file,
)
from .dac import DacConfig, DacStats, dac_align, dac_align_stats, merge, whole_document_align
from .dp import (
    BeadSet,
    GaleChurchScorer,
    align_chunk,
    alignment_cost,
    backend,
    banded_align,
    gale_church_cost,
)
from .embed import EmbeddingMatrix, cosine, from_array, knn, load_embeddings
from .evaluation import delimiter_prf, strict_prf, true_hard_delimiters
from .lexical import LexicalScorer, TTable, lexical_bead_cost, load_ttable
from .miner import (
    Candidate,
    longest_monotone_chain,
    margin_score,
    mine_candidates,
    segment,
    select_hard_delimiters,
)
from .simulator import (
    SimConfig,
    exhaustive_expected_max_chunk,
    expected_max_chunk,
    max_chunk_size,
    sample_arrangement,
    sweep,
)

__version__ = "0.1.0"
