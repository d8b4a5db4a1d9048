"""Monte Carlo estimation of the expected maximum chunk size.

An arrangement is a boolean sequence over n alignments; flag t is true
when alignment t is 1-to-1. Each flag is an independent Bernoulli(r) draw.
Position t is a split point when flags t-1, t, t+1 are all true; the
maximum chunk size is the longest run of positions strictly between
consecutive split points (n when there is none).

Randomness comes from numpy's PCG64 generator, so a seed pins the output
bit-for-bit across platforms. For small n the expectation is also
computed exactly by enumerating all 2^n arrangements, which serves as the
simulator's oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ValidationError

EXHAUSTIVE_MAX_N = 20


@dataclass(frozen=True)
class SimConfig:
    n: int
    r: float
    trials: int = 10_000
    seed: int = 42

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        if not 0.0 <= self.r <= 1.0:
            raise ValidationError(f"r must be in [0, 1], got {self.r}")
        if self.trials < 1:
            raise ValidationError(f"trials must be >= 1, got {self.trials}")


def rng_from_seed(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_arrangement(cfg: SimConfig, rng: np.random.Generator) -> np.ndarray:
    """One arrangement: n independent Bernoulli(r) flags."""
    return rng.random(cfg.n) < cfg.r


def max_chunk_size(flags) -> int:
    """Largest number of alignments between consecutive split points."""
    flags = np.asarray(flags, dtype=bool)
    n = flags.size
    if n < 1:
        raise ValidationError("arrangement must have at least one alignment")
    if n < 3:
        return n
    delim = np.flatnonzero(flags[:-2] & flags[1:-1] & flags[2:]) + 1
    if delim.size == 0:
        return n
    edges = np.concatenate(([-1], delim, [n]))
    return int((np.diff(edges) - 1).max())


def _mc(cfg: SimConfig, rng: np.random.Generator) -> tuple[float, float]:
    sizes = np.empty(cfg.trials, dtype=np.float64)
    for t in range(cfg.trials):
        sizes[t] = max_chunk_size(sample_arrangement(cfg, rng))
    mean = float(sizes.mean())
    stderr = float(sizes.std(ddof=1) / math.sqrt(cfg.trials)) if cfg.trials > 1 else 0.0
    return mean, stderr


def expected_max_chunk(cfg: SimConfig) -> tuple[float, float]:
    """Sample mean and standard error over cfg.trials arrangements."""
    return _mc(cfg, rng_from_seed(cfg.seed))


def exhaustive_expected_max_chunk(n: int, r: float) -> float:
    """Exact expectation by enumerating all 2^n arrangements (n <= 20)."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if n > EXHAUSTIVE_MAX_N:
        raise ValidationError(f"n={n} too large for enumeration (max {EXHAUSTIVE_MAX_N})")
    if not 0.0 <= r <= 1.0:
        raise ValidationError(f"r must be in [0, 1], got {r}")
    weight = [r**k * (1.0 - r) ** (n - k) for k in range(n + 1)]
    total = 0.0
    for code in range(1 << n):
        # delimiter at position t+1 iff bits t, t+1, t+2 are all set
        mask = code & (code >> 1) & (code >> 2) & ((1 << max(0, n - 2)) - 1)
        if mask == 0:
            size = n
        else:
            size = 0
            prev = -1
            rest = mask
            while rest:
                low = rest & -rest
                pos = low.bit_length()  # delimiter position (t+1)
                size = max(size, pos - prev - 1)
                prev = pos
                rest ^= low
            size = max(size, n - 1 - prev)
        total += weight[code.bit_count()] * size
    return total


def sweep(n_list, r_list, trials: int, seed: int, exact: bool = False):
    """One (n, r, mean, stderr) row per pair, in n-major order.

    Each Monte Carlo cell draws from its own child stream of the seed, so
    the full table is reproducible and cells are independent. With
    `exact`, means come from exhaustive enumeration and stderr is 0.
    """
    if not n_list or not r_list:
        raise ValidationError("n and r lists must be non-empty")
    rows = []
    children = np.random.SeedSequence(seed).spawn(len(n_list) * len(r_list))
    idx = 0
    for n in n_list:
        for r in r_list:
            if exact:
                rows.append((n, r, exhaustive_expected_max_chunk(n, r), 0.0))
            else:
                cfg = SimConfig(n=n, r=r, trials=trials, seed=seed)
                mean, stderr = _mc(cfg, np.random.Generator(np.random.PCG64(children[idx])))
                rows.append((n, r, mean, stderr))
            idx += 1
    return rows


def sweep_csv(rows) -> str:
    lines = ["n,r,mean,stderr"]
    for n, r, mean, stderr in rows:
        lines.append(f"{n},{r:g},{mean:.6f},{stderr:.6f}")
    return "\n".join(lines) + "\n"
