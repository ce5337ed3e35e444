"""Deterministic seed-to-subset sampler and its entropy-preservation check.

A sampler maps an r-bit seed to a size-t subset of {0..N-1} by running a
partial Fisher-Yates shuffle driven by the seed's PRG word stream.  The
contract the experiments rely on: restricting a high-min-entropy source
to the sampled coordinates leaves the min-entropy rate essentially
intact, up to a configured slack.  `validate_entropy_preservation`
checks that exhaustively on structured flat test sources.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .crypto import ToyPrg, prg_stream_words
from .field import Bits


def default_seed_bits(universe: int, exponent: float = 0.5) -> int:
    """Seed length: universe**exponent bits, rounded up to whole bytes."""
    raw = int(np.ceil(universe**exponent))
    return ((raw + 7) // 8) * 8


@dataclass(frozen=True)
class SubsetSampler:
    """samp: {0,1}^r -> (size-t subsets of {0..universe-1})."""

    r_bits: int
    universe: int
    t: int
    tag: str = "samp"

    def __post_init__(self):
        if not 0 <= self.t <= self.universe:
            raise ValueError("subset size must lie in [0, universe]")
        if self.r_bits < 1:
            raise ValueError("seed must have at least one bit")

    @property
    def kernel(self) -> str:
        return f"fisher-yates/aes128-ctr/{self.tag}"

    def _prg(self) -> ToyPrg:
        return ToyPrg(self.r_bits, self.r_bits + 1 + 32 * max(self.t, 1), self.tag)


def samp(seed: Bits, s: SubsetSampler) -> np.ndarray:
    """The subset for this seed, ascending; deterministic in the seed."""
    if seed.n != s.r_bits:
        raise ValueError(f"seed must be {s.r_bits} bits, got {seed.n}")
    if s.t == 0:
        return np.empty(0, dtype=np.int64)
    if s.t == s.universe:
        return np.arange(s.universe, dtype=np.int64)
    prg = s._prg()
    nwords = 2 * s.t + 32
    while True:
        words = prg_stream_words(prg, seed, nwords)
        try:
            return _kernels.fisher_yates_subset(words, s.universe, s.t)
        except _kernels.StreamExhausted:
            nwords *= 2  # word stream is prefix-stable, so retry extends it


@dataclass(frozen=True)
class SourceReport:
    name: str
    floor_bits: float
    max_deficiency: float
    mean_deficiency: float
    per_seed_entropy_min: float

    def passes(self, tolerance: float) -> bool:
        return self.max_deficiency <= tolerance


def restricted_support(support, subset) -> np.ndarray:
    """Project each support string onto the subset coordinates."""
    support = np.asarray(support, dtype=np.int64)
    out = np.zeros(len(support), dtype=np.int64)
    for out_i, i in enumerate(subset):
        out |= ((support >> int(i)) & 1) << out_i
    return out


def deficiency_mass(support_proj: np.ndarray, floor_bits: float) -> float:
    """Probability mass above the 2^-floor cap for a flat source.

    Equals the minimum statistical distance to any distribution with
    min-entropy >= floor_bits.
    """
    theta = 2.0 ** (-floor_bits)
    _, counts = np.unique(support_proj, return_counts=True)
    probs = counts / len(support_proj)
    return float(np.maximum(probs - theta, 0.0).sum())


EXHAUSTIVE_UNIVERSE_CAP = 20


def validate_entropy_preservation(
    s: SubsetSampler,
    source_entropy_rate: float,
    slack: float,
    sources=None,
    family_seed: int = 0,
) -> list:
    """Exhaustively check restriction min-entropy against the floor.

    For each flat test source X with H(X) >= mu*N and every sampler
    seed, computes the deficiency mass of X restricted to the sampled
    coordinates against the floor (mu - slack) * t.  Returns one
    SourceReport per source; `sources` defaults to a generated family of
    uniform and random-subspace sources at the requested rate.
    """
    if s.universe > EXHAUSTIVE_UNIVERSE_CAP:
        raise ValueError(
            f"exhaustive validation capped at universe {EXHAUSTIVE_UNIVERSE_CAP}"
        )
    mu = source_entropy_rate
    if sources is None:
        sources = default_source_family(s.universe, mu, family_seed)
    floor = (mu - slack) * s.t
    reports = []
    for name, support in sources:
        worst = 0.0
        total = 0.0
        ent_min = float("inf")
        n_seeds = 1 << s.r_bits
        for seed_val in range(n_seeds):
            subset = samp(Bits(seed_val, s.r_bits), s)
            proj = restricted_support(support, subset)
            mass = deficiency_mass(proj, floor)
            worst = max(worst, mass)
            total += mass
            _, counts = np.unique(proj, return_counts=True)
            ent_min = min(ent_min, -np.log2(counts.max() / len(proj)))
        reports.append(
            SourceReport(
                name=name,
                floor_bits=floor,
                max_deficiency=worst,
                mean_deficiency=total / n_seeds,
                per_seed_entropy_min=float(ent_min),
            )
        )
    return reports


def uniform_source(universe: int) -> np.ndarray:
    return np.arange(1 << universe, dtype=np.int64)


def subspace_source(universe: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform flat source over a random GF(2)-linear subspace."""
    while True:
        basis = [int(rng.integers(1, 1 << universe)) for _ in range(dim)]
        if gf2_rank(basis) == dim:
            break
    out = np.zeros(1 << dim, dtype=np.int64)
    for i in range(1 << dim):
        v = 0
        for j in range(dim):
            if (i >> j) & 1:
                v ^= basis[j]
        out[i] = v
    return out


def window_source(universe: int, window) -> np.ndarray:
    """Uniform over strings that vanish outside the window coordinates."""
    window = [int(w) for w in window]
    out = np.zeros(1 << len(window), dtype=np.int64)
    for i in range(1 << len(window)):
        v = 0
        for j, w in enumerate(window):
            if (i >> j) & 1:
                v |= 1 << w
        out[i] = v
    return out


def gf2_rank(rows) -> int:
    rank = 0
    pool = [int(r) for r in rows if r]
    while pool:
        pivot = pool.pop()
        if pivot == 0:
            continue
        rank += 1
        high = pivot.bit_length() - 1
        pool = [r ^ pivot if (r >> high) & 1 else r for r in pool]
        pool = [r for r in pool if r]
    return rank


def default_source_family(universe: int, mu: float, family_seed: int = 0) -> list:
    from .rng import stream

    rng = stream(family_seed, "sampler-sources", universe)
    dim = int(np.ceil(mu * universe))
    fam = []
    if dim >= universe:
        fam.append(("uniform", uniform_source(universe)))
    else:
        for i in range(3):
            fam.append((f"subspace-{dim}-{i}", subspace_source(universe, dim, rng)))
    return fam
