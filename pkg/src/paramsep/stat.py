"""Exact statistics: min-entropy, statistical distance, bias, validators.

Everything here is exhaustive and exact: no sampling.  Probabilities are
held in extended precision (80-bit long double, 64-bit significand) and
the tolerance constants live in one place (`TOL`).  Distributions over
GF(2^ell)^n pack each outcome into an integer, ell bits per coordinate,
coordinate 0 in the low bits.

The validators make the trace-bias toolbox executable: the inner-product
extractor bound, the small-bias masking bound with its Parseval and
convolution-bias identities, the small bias of noisy Reed-Solomon
codewords, and the two average-min-entropy facts used by the parameter
lower bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coding import RsCode, rs_encode
from .field import FieldParams

LD = np.longdouble


@dataclass(frozen=True)
class StatTolerances:
    weight_sum: float = 2.0**-40
    identity: float = 2.0**-30


TOL = StatTolerances()


@dataclass(frozen=True)
class Dist:
    """Finite distribution: distinct hashable outcomes with weights."""

    outcomes: tuple
    probs: tuple  # long doubles

    def __post_init__(self):
        if len(self.outcomes) != len(self.probs) or not self.outcomes:
            raise ValueError("need matching, nonempty outcomes and probs")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise ValueError("outcomes must be distinct")
        arr = np.array(self.probs, dtype=LD)
        if np.any(arr < 0):
            raise ValueError("negative probability")
        if abs(float(arr.sum() - 1)) > TOL.weight_sum:
            raise ValueError(f"weights sum to {arr.sum()}, not 1")

    @classmethod
    def from_mapping(cls, mapping) -> "Dist":
        items = sorted(mapping.items(), key=lambda kv: kv[0])
        return cls(tuple(k for k, _ in items), tuple(LD(v) for _, v in items))

    @classmethod
    def uniform(cls, outcomes) -> "Dist":
        outcomes = tuple(outcomes)
        p = LD(1) / LD(len(outcomes))
        return cls(outcomes, (p,) * len(outcomes))

    @classmethod
    def point(cls, outcome) -> "Dist":
        return cls((outcome,), (LD(1),))

    def as_dict(self) -> dict:
        return dict(zip(self.outcomes, (LD(p) for p in self.probs)))

    def prob_array(self) -> np.ndarray:
        return np.array(self.probs, dtype=LD)


def stat_dist(a: Dist, b: Dist) -> float:
    """Total variation distance 0.5 * sum |p - q| on the joint universe."""
    da, db = a.as_dict(), b.as_dict()
    total = LD(0)
    for w in set(da) | set(db):
        total += abs(da.get(w, LD(0)) - db.get(w, LD(0)))
    return float(total / 2)


def min_entropy(d: Dist) -> float:
    return float(-np.log2(max(d.probs)))


def avg_min_entropy(joint: Dist) -> float:
    """H(X|Z) averaged: outcomes of `joint` are (x, z) pairs."""
    best: dict = {}
    for (x, z), p in zip(joint.outcomes, joint.probs):
        if p > best.get(z, LD(0)):
            best[z] = p
    return float(-np.log2(np.array(list(best.values()), dtype=LD).sum()))


def conditional_dists(joint: Dist) -> dict:
    """z -> (P(Z=z), Dist of X given Z=z)."""
    groups: dict = {}
    for (x, z), p in zip(joint.outcomes, joint.probs):
        groups.setdefault(z, {})[x] = groups.get(z, {}).get(x, LD(0)) + p
    out = {}
    for z, mapping in groups.items():
        mass = sum(mapping.values(), LD(0))
        out[z] = (mass, Dist.from_mapping({x: p / mass for x, p in mapping.items()}))
    return out


@dataclass(frozen=True)
class ChainBoundReport:
    h_min_x: float
    h_avg: float
    support_z_log: float
    holds: bool


def min_entropy_chain_check(joint: Dist) -> ChainBoundReport:
    """Average min-entropy drops by at most log |Supp(Z)|."""
    xs = {}
    zs = set()
    for (x, z), p in zip(joint.outcomes, joint.probs):
        xs[x] = xs.get(x, LD(0)) + p
        zs.add(z)
    h_x = float(-np.log2(np.array(list(xs.values()), dtype=LD).max()))
    h_avg = avg_min_entropy(joint)
    m = math.log2(len(zs))
    return ChainBoundReport(h_x, h_avg, m, h_avg >= h_x - m - TOL.identity)


def min_entropy_spread_check(joint: Dist, eps: float) -> tuple:
    """Pr_z[H(X|Z=z) >= avg - log(1/eps)] >= 1 - eps; returns (prob, holds)."""
    h_avg = avg_min_entropy(joint)
    threshold = h_avg - math.log2(1 / eps)
    good = LD(0)
    for _, (mass, cond) in conditional_dists(joint).items():
        if min_entropy(cond) >= threshold - 1e-12:
            good += mass
    return float(good), float(good) >= 1 - eps - TOL.identity


def _wht_inplace(v: np.ndarray) -> None:
    n = len(v)
    h = 1
    while h < n:
        for i in range(0, n, 2 * h):
            a = v[i : i + h].copy()
            b = v[i + h : i + 2 * h].copy()
            v[i : i + h] = a + b
            v[i + h : i + 2 * h] = a - b
        h *= 2


IP_EXHAUSTIVE_CAP = 14


@dataclass(frozen=True)
class IpReport:
    n: int
    h_min: float
    sd: float
    stated_bound: float
    proof_bound: float
    collision_bound: float
    pass_stated: bool
    pass_proof: bool


def ip_extractor_check(x_dist: Dist, n: int) -> IpReport:
    """Exact distance of (Y, <X,Y>) from uniform versus the two bounds.

    stated: sd <= 2^(-H/2), the form used by the lower-bound arguments;
    proof:  sd <= 0.5 * sqrt(2^(-H-1)), what the derivation itself gives;
    collision: 0.5 * sqrt(CP/2) with CP the collision probability, the
    exact Jensen step before bounding CP by 2^(-H).
    """
    if n > IP_EXHAUSTIVE_CAP:
        raise ValueError(f"exhaustive check capped at n={IP_EXHAUSTIVE_CAP}")
    p = np.zeros(1 << n, dtype=LD)
    for x, pr in zip(x_dist.outcomes, x_dist.probs):
        if not 0 <= int(x) < 1 << n:
            raise ValueError("outcome outside {0,1}^n")
        p[int(x)] += pr
    spec = p.copy()
    _wht_inplace(spec)
    sd = float(np.abs(spec).sum() / (2 ** (n + 1)))
    h = min_entropy(x_dist)
    cp = float((p * p).sum())
    stated = 2.0 ** (-h / 2)
    proof = 0.5 * math.sqrt(2.0 ** (-h - 1))
    coll = 0.5 * math.sqrt(cp / 2)
    return IpReport(
        n=n,
        h_min=h,
        sd=sd,
        stated_bound=stated,
        proof_bound=proof,
        collision_bound=coll,
        pass_stated=sd <= stated + TOL.identity,
        pass_proof=sd <= proof + TOL.identity,
    )


# -- bias over GF(2^ell)^n ----------------------------------------------

SPECTRUM_CAP_BITS = 20


def _unpack(outcomes, fp: FieldParams, n: int) -> np.ndarray:
    out = np.empty((len(outcomes), n), dtype=np.uint16)
    mask = fp.order - 1
    for row, v in enumerate(outcomes):
        v = int(v)
        for i in range(n):
            out[row, i] = (v >> (i * fp.ell)) & mask
    return out


def bias_signed(d: Dist, alpha, fp: FieldParams, n: int) -> float:
    """E[(-1)^Tr<x, alpha>] with sign, by direct summation."""
    alpha = np.asarray(alpha, dtype=np.uint16)
    xs = _unpack(d.outcomes, fp, n)
    prods = fp.mul_vec(xs, alpha[None, :])
    acc = prods[:, 0]
    for i in range(1, n):
        acc = acc ^ prods[:, i]
    signs = 1 - 2 * fp.trace_table()[acc].astype(np.int64)
    return float((np.array(d.probs, dtype=LD) * signs).sum())


def bias(d: Dist, alpha, fp: FieldParams, n: int) -> float:
    return abs(bias_signed(d, alpha, fp, n))


def bias_spectrum(d: Dist, fp: FieldParams, n: int) -> np.ndarray:
    """Signed bias at every alpha, indexed by the packed alpha value."""
    q = fp.order
    if n * fp.ell > SPECTRUM_CAP_BITS:
        raise ValueError("spectrum enumeration too large")
    vec = np.zeros(q**n, dtype=LD)
    for x, pr in zip(d.outcomes, d.probs):
        vec[int(x)] += pr
    tr = fp.trace_table()
    chars = np.empty((q, q), dtype=LD)
    for a in range(q):
        row = fp.mul_vec(np.full(q, a, dtype=np.uint16), np.arange(q, dtype=np.uint16))
        chars[a] = 1 - 2 * tr[row].astype(np.int64)
    arr = vec.reshape((q,) * n)
    for axis in range(n):
        arr = np.moveaxis(np.tensordot(chars, arr, axes=([1], [axis])), 0, axis)
    return arr.reshape(-1)


def max_bias(d: Dist, fp: FieldParams, n: int) -> float:
    spec = np.abs(bias_spectrum(d, fp, n))
    spec[0] = 0
    return float(spec.max())


def parseval_gap(d: Dist, fp: FieldParams, n: int) -> float:
    """|sum_alpha bias^2 - q^n * sum_w P(w)^2|; zero up to float error."""
    spec = bias_spectrum(d, fp, n)
    lhs = (spec * spec).sum()
    p = np.array(d.probs, dtype=LD)
    rhs = LD(fp.order) ** n * (p * p).sum()
    return float(abs(lhs - rhs))


def convolve(x: Dist, y: Dist) -> Dist:
    """Distribution of X + Y with coordinate-wise field addition (XOR)."""
    acc: dict = {}
    for xo, xp in zip(x.outcomes, x.probs):
        for yo, yp in zip(y.outcomes, y.probs):
            w = int(xo) ^ int(yo)
            acc[w] = acc.get(w, LD(0)) + xp * yp
    return Dist.from_mapping(acc)


def convolution_bias_identity_gap(x: Dist, y: Dist, alpha, fp: FieldParams, n: int) -> float:
    """|bias(X+Y, a) - bias(X, a) bias(Y, a)| on signed biases."""
    lhs = bias_signed(convolve(x, y), alpha, fp, n)
    rhs = bias_signed(x, alpha, fp, n) * bias_signed(y, alpha, fp, n)
    return abs(lhs - rhs)


@dataclass(frozen=True)
class MaskingReport:
    sd: float
    bound: float
    h_min_x: float
    eps_y: float
    holds: bool


def masking_check(x: Dist, y: Dist, fp: FieldParams, n: int) -> MaskingReport:
    """SD(X+Y, U) against 2^((n ell - k)/2 - 1) * eps with k = H(X)."""
    conv = convolve(x, y)
    uni = Dist.uniform(range(fp.order**n))
    sd = stat_dist(conv, uni)
    k = min_entropy(x)
    eps = max_bias(y, fp, n)
    bound = 2.0 ** ((n * fp.ell - k) / 2 - 1) * eps
    return MaskingReport(sd, bound, k, eps, sd <= bound + TOL.identity)


def noisy_rs_dist(code: RsCode, s_errors: int) -> Dist:
    """Exact law of a uniform codeword with s coordinates re-randomized.

    A uniform size-s coordinate subset is overwritten with uniform
    symbols (possibly equal to what they replace).
    """
    from itertools import combinations, product

    fp = code.field
    q = fp.order
    n, k = code.n, code.k
    if k * fp.ell > 20 or n * fp.ell > SPECTRUM_CAP_BITS:
        raise ValueError("enumeration too large")
    subsets = list(combinations(range(n), s_errors))
    weight = LD(1) / (LD(q) ** k * LD(len(subsets)) * LD(q) ** s_errors)
    acc: dict = {}
    shifts = [i * fp.ell for i in range(n)]
    for packed in range(q**k):
        msg = np.array(
            [(packed >> (j * fp.ell)) & (q - 1) for j in range(k)], dtype=np.uint16
        )
        cw = rs_encode(msg, code)
        base = 0
        for i in range(n):
            base |= int(cw[i]) << shifts[i]
        for subset in subsets:
            clear = base
            for i in subset:
                clear &= ~((q - 1) << shifts[i])
            for noise in product(range(q), repeat=s_errors):
                w = clear
                for i, v in zip(subset, noise):
                    w |= v << shifts[i]
                acc[w] = acc.get(w, LD(0)) + weight
    return Dist.from_mapping(acc)
