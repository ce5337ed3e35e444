"""Toy pseudorandom generator and one-time signature.

The PRG expands a short seed with a fixed-key AES-128 permutation in
counter mode over (seed, domain, counter) blocks; distinct kernel tags
give independent expanders.  Seeds are small enough that exhaustive
inversion is feasible, which is how information-theoretic parties are
realized: they are exhaustive searches under explicit effort caps.

The signature is a Lamport one-time scheme for the message space {0,1}
over a truncated SHA-256.  `hash_bits` sets the verification hash width
and `preimage_bits` the signature width; forging is an exhaustive
preimage search, so `effort` against `2**preimage_bits` is the dial
between efficient and unbounded adversaries.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from .field import Bits

_BLOCK = 16


class NotInRange(Exception):
    """Target is outside the PRG image."""


class ForgeFailure(Exception):
    """Preimage search exhausted its effort budget."""


@lru_cache(maxsize=None)
def _kernel_key(tag: str) -> bytes:
    return hashlib.sha256(b"paramsep.prg-kernel:" + tag.encode()).digest()[:16]


@lru_cache(maxsize=None)
def _encryptor_factory(tag: str):
    return Cipher(algorithms.AES(_kernel_key(tag)), modes.ECB())


def _expand_raw(tag: str, seed_value: int, domain: int, nbytes: int) -> bytes:
    """Counter-mode expansion; output prefixes are length-stable."""
    nblocks = (nbytes + _BLOCK - 1) // _BLOCK
    buf = bytearray(nblocks * _BLOCK)
    seed8 = seed_value.to_bytes(8, "little")
    for j in range(nblocks):
        base = j * _BLOCK
        buf[base : base + 8] = seed8
        buf[base + 8] = domain
        buf[base + 9 : base + 16] = j.to_bytes(7, "little")
    enc = _encryptor_factory(tag).encryptor()
    return (enc.update(bytes(buf)) + enc.finalize())[:nbytes]


@dataclass(frozen=True)
class ToyPrg:
    """Deterministic seed expander f: {0,1}^seed_bits -> {0,1}^out_bits."""

    seed_bits: int
    out_bits: int
    tag: str = "f1"

    def __post_init__(self):
        if self.out_bits <= self.seed_bits:
            raise ValueError("a PRG must stretch: out_bits > seed_bits")
        if self.seed_bits > 48:
            raise ValueError("seed too wide for the block layout")

    @property
    def kernel(self) -> str:
        return f"aes128-ctr/{self.tag}"


def prg_expand(seed: Bits, g: ToyPrg) -> Bits:
    if seed.n != g.seed_bits:
        raise ValueError(f"seed must be {g.seed_bits} bits, got {seed.n}")
    raw = _expand_raw(g.tag, seed.value, 0, (g.out_bits + 7) // 8)
    return Bits.from_bytes(raw, g.out_bits)


def prg_stream_words(g: ToyPrg, seed: Bits, nwords: int, domain: int = 1) -> np.ndarray:
    """uint32 word stream derived from the seed (selection machinery).

    Runs in a separate counter-mode domain from `prg_expand`, so the
    same seed can drive both without interaction; prefixes are stable
    under extension.
    """
    if seed.n != g.seed_bits:
        raise ValueError(f"seed must be {g.seed_bits} bits, got {seed.n}")
    raw = _expand_raw(g.tag, seed.value, domain, 4 * nwords)
    return np.frombuffer(raw, dtype="<u4").copy()


INVERT_SEED_CAP = 24


def prg_invert(target: Bits, g: ToyPrg) -> Bits:
    """Smallest seed expanding to the target, else NotInRange.

    Exhaustive over the 2^seed_bits seed space; capped at seed widths
    where that is a desk-scale computation.
    """
    if g.seed_bits > INVERT_SEED_CAP:
        raise ValueError(f"inversion supported only up to {INVERT_SEED_CAP} seed bits")
    if target.n != g.out_bits:
        raise ValueError(f"target must be {g.out_bits} bits, got {target.n}")
    prefix_bits = min(g.out_bits, 8 * _BLOCK)
    prefix_mask = (1 << prefix_bits) - 1
    want = target.value & prefix_mask
    chunk = 1 << 14
    total = 1 << g.seed_bits
    enc_factory = _encryptor_factory(g.tag)
    for start in range(0, total, chunk):
        count = min(chunk, total - start)
        buf = bytearray(count * _BLOCK)
        for i in range(count):
            buf[i * _BLOCK : i * _BLOCK + 8] = (start + i).to_bytes(8, "little")
        enc = enc_factory.encryptor()
        out = enc.update(bytes(buf)) + enc.finalize()
        blocks = np.frombuffer(out, dtype=np.uint8).reshape(count, _BLOCK)
        nbytes = (prefix_bits + 7) // 8
        cand = blocks[:, :nbytes].tobytes()
        for i in range(count):
            got = int.from_bytes(cand[i * nbytes : (i + 1) * nbytes], "little")
            if got & prefix_mask == want:
                seed = Bits(start + i, g.seed_bits)
                if prg_expand(seed, g) == target:
                    return seed
    raise NotInRange("no seed expands to the target")


@dataclass(frozen=True)
class OtsParams:
    """Lamport scheme widths; defaults keep signature and hash equal."""

    hash_bits: int
    preimage_bits: int = 0

    def __post_init__(self):
        if self.preimage_bits == 0:
            object.__setattr__(self, "preimage_bits", self.hash_bits)
        if self.hash_bits < 1 or self.preimage_bits < 1:
            raise ValueError("widths must be positive")


@dataclass(frozen=True)
class OtsKeys:
    params: OtsParams
    vk: tuple  # (hash of sk[0], hash of sk[1])
    sk: tuple  # two preimages


def ots_hash(x: int, params: OtsParams) -> int:
    raw = hashlib.sha256(
        b"paramsep.ots:%d:%d:" % (params.preimage_bits, params.hash_bits)
        + x.to_bytes((params.preimage_bits + 7) // 8, "little")
    ).digest()
    return int.from_bytes(raw, "little") & ((1 << params.hash_bits) - 1)


def ots_gen(params: OtsParams, rng: np.random.Generator) -> OtsKeys:
    from .rng import stream_bits

    sk = (stream_bits(rng, params.preimage_bits), stream_bits(rng, params.preimage_bits))
    vk = (ots_hash(sk[0], params), ots_hash(sk[1], params))
    return OtsKeys(params=params, vk=vk, sk=sk)


def ots_sign(keys: OtsKeys, bit: int) -> int:
    return keys.sk[bit & 1]


def ots_verify(vk: tuple, bit: int, sig: int, params: OtsParams) -> int:
    return int(ots_hash(sig, params) == vk[bit & 1])


_TABLE_CAP_BITS = 16


@lru_cache(maxsize=8)
def _preimage_hash_table(params: OtsParams) -> np.ndarray:
    """All hashes over a small preimage space, indexed by preimage."""
    space = 1 << params.preimage_bits
    return np.array([ots_hash(x, params) for x in range(space)], dtype=np.int64)


def ots_forge(vk: tuple, target_bit: int, effort: int, params: OtsParams) -> int:
    """Exhaustive ascending preimage search for H(x) = vk[target_bit].

    Spends at most `effort` hash evaluations; with effort covering the
    whole preimage space the search always succeeds, since the honest
    key is in it.  Raises ForgeFailure when the budget runs out.
    """
    target = vk[target_bit & 1]
    space = 1 << params.preimage_bits
    limit = min(effort, space)
    if params.preimage_bits <= _TABLE_CAP_BITS:
        table = _preimage_hash_table(params)
        hits = np.nonzero(table[:limit] == target)[0]
        if hits.size:
            return int(hits[0])
        raise ForgeFailure(f"no preimage within effort {effort}")
    for x in range(limit):
        if ots_hash(x, params) == target:
            return x
    raise ForgeFailure(f"no preimage within effort {effort}")
