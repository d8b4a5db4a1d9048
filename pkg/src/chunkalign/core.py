"""Core domain types shared by every stage of the aligner.

Coordinate conventions:
  * sentences are 0-indexed per document; all spans are half-open [start, stop)
  * a bead pairs one contiguous source span with one contiguous target span;
    either span (but not both) may be empty, which encodes an unaligned
    sentence (a "null bead")
  * an alignment is an ordered, non-crossing bead sequence that partitions
    both index spaces exactly

Alignment text format (one bead per line, UTF-8, LF):

    i1,i2,...:j1,j2,...

with 0-based ascending indices on each side of the colon; an empty side is
the empty string, so ``:3`` is a 0-to-1 bead and ``2:`` is 1-to-0.

All types here are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class ValidationError(ValueError):
    """Input failed a structural check (bad flag value, malformed file...)."""


Span = tuple[int, int]


@dataclass(frozen=True)
class Bead:
    """One alignment unit: a source span paired with a target span.

    Empty spans are stored as (p, p) where p anchors the bead's position in
    the document order.
    """

    src: Span
    tgt: Span

    def __post_init__(self):
        for name, (start, stop) in (("src", self.src), ("tgt", self.tgt)):
            if start < 0 or stop < start:
                raise ValidationError(f"bad {name} span {start, stop}")
        if self.src[0] == self.src[1] and self.tgt[0] == self.tgt[1]:
            raise ValidationError("bead with both spans empty")

    @property
    def bead_type(self) -> tuple[int, int]:
        return (self.src[1] - self.src[0], self.tgt[1] - self.tgt[0])

    @property
    def is_null(self) -> bool:
        a, b = self.bead_type
        return a == 0 or b == 0


@dataclass(frozen=True)
class AlignmentSet:
    """Ordered beads that exactly partition [0, n_src) x [0, n_tgt)."""

    beads: tuple[Bead, ...]
    n_src: int
    n_tgt: int


@dataclass(frozen=True)
class Delimiter:
    """A 1-to-1 pair usable as a hard split point, with similarity evidence.

    Interior by definition: both neighbours must exist on both sides, so
    document-boundary sentences never qualify.
    """

    src_idx: int
    tgt_idx: int
    cosine: float
    margin: float

    def __post_init__(self):
        if not -1.0 <= self.cosine <= 1.0 + 1e-9:
            raise ValidationError(f"cosine {self.cosine} outside [-1, 1]")
        if self.margin < 0.0:
            raise ValidationError(f"negative margin {self.margin}")


@dataclass(frozen=True)
class Chunk:
    """A rectangular sub-problem: source range x target range.

    At most one side may be empty; an empty-by-empty chunk has no content
    and is never constructed.
    """

    src: Span
    tgt: Span

    def __post_init__(self):
        for name, (start, stop) in (("src", self.src), ("tgt", self.tgt)):
            if start < 0 or stop < start:
                raise ValidationError(f"bad {name} range {start, stop}")
        if self.src[0] == self.src[1] and self.tgt[0] == self.tgt[1]:
            raise ValidationError("chunk empty on both sides")

    @property
    def n_src(self) -> int:
        return self.src[1] - self.src[0]

    @property
    def n_tgt(self) -> int:
        return self.tgt[1] - self.tgt[0]


def validate_beads(
    beads: Sequence[Bead],
    src_range: Span,
    tgt_range: Span,
    bead_set: Iterable[tuple[int, int]] | None = None,
) -> str | None:
    """Check that `beads` exactly tile the given rectangle, in order.

    Returns None when valid, otherwise a message naming the first violated
    invariant and the offending bead index.
    """
    allowed = set(bead_set) if bead_set is not None else None
    next_src, next_tgt = src_range[0], tgt_range[0]
    for k, bead in enumerate(beads):
        a, b = bead.bead_type
        if allowed is not None and (a, b) not in allowed:
            return f"bead {k}: type {(a, b)} not in bead set"
        if a > 0:
            if bead.src[0] < next_src:
                return f"bead {k}: source overlap at index {bead.src[0]}"
            if bead.src[0] > next_src:
                return f"bead {k}: source index {next_src} uncovered"
            next_src = bead.src[1]
        if b > 0:
            if bead.tgt[0] < next_tgt:
                return f"bead {k}: target overlap at index {bead.tgt[0]}"
            if bead.tgt[0] > next_tgt:
                return f"bead {k}: target index {next_tgt} uncovered"
            next_tgt = bead.tgt[1]
        if next_src > src_range[1]:
            return f"bead {k}: source index {next_src - 1} out of bounds"
        if next_tgt > tgt_range[1]:
            return f"bead {k}: target index {next_tgt - 1} out of bounds"
    if next_src != src_range[1]:
        return f"source index {next_src} uncovered"
    if next_tgt != tgt_range[1]:
        return f"target index {next_tgt} uncovered"
    return None


def validate_alignment_set(
    a: AlignmentSet, bead_set: Iterable[tuple[int, int]] | None = None
) -> str | None:
    """Return None iff `a` is a valid exact partition of both documents."""
    if a.n_src < 0 or a.n_tgt < 0:
        return "negative document size"
    return validate_beads(a.beads, (0, a.n_src), (0, a.n_tgt), bead_set)


def format_bead(bead: Bead) -> str:
    src = ",".join(str(i) for i in range(*bead.src))
    tgt = ",".join(str(j) for j in range(*bead.tgt))
    return f"{src}:{tgt}"


def parse_bead(line: str, next_src: int, next_tgt: int) -> Bead:
    """Parse one bead line; empty sides anchor at the current position."""
    if line.count(":") != 1:
        raise ValidationError(f"expected one ':' in bead line {line!r}")
    src_part, tgt_part = line.split(":")
    spans = []
    for part, cursor, side in ((src_part, next_src, "source"), (tgt_part, next_tgt, "target")):
        if not part:
            spans.append((cursor, cursor))
            continue
        try:
            idx = [int(tok) for tok in part.split(",")]
        except ValueError:
            raise ValidationError(f"non-integer {side} index in bead line {line!r}") from None
        if any(b != a + 1 for a, b in zip(idx, idx[1:])):
            raise ValidationError(f"{side} indices not contiguous ascending in {line!r}")
        spans.append((idx[0], idx[-1] + 1))
    return Bead(spans[0], spans[1])


def write_alignment_file(path, alignment: AlignmentSet) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_alignment(alignment))


def serialize_alignment(alignment: AlignmentSet) -> str:
    return "".join(format_bead(b) + "\n" for b in alignment.beads)


def read_alignment_file(path) -> AlignmentSet:
    """Load and validate an alignment file.

    Document sizes are inferred from coverage: a valid file tiles both index
    spaces exactly, so the sizes are the total span lengths.
    """
    beads = []
    next_src = next_tgt = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                bead = parse_bead(line, next_src, next_tgt)
            except ValidationError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
            beads.append(bead)
            next_src = max(next_src, bead.src[1])
            next_tgt = max(next_tgt, bead.tgt[1])
    alignment = AlignmentSet(tuple(beads), next_src, next_tgt)
    problem = validate_alignment_set(alignment)
    if problem is not None:
        raise ValidationError(f"{path}: {problem}")
    return alignment
