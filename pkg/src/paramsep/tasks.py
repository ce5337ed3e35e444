"""The two learning-task constructions: instances, labels, layouts.

Task 1 ("c1"): an instance carries two wrapped sampler seeds, a cleartext
message m over the field, and a masked codeword Enc(m) + mask, where the
mask is the restriction of a long secret string to sampled coordinates.
The label is a GF(2) inner product between m (as bits) and another
sampled restriction of a second secret string.

Task 2 ("c2"): an instance carries wrapped sampler seed u, wrapped v,
a wrapped one-time verification key, the codeword of (b, signature),
and a wrapped payload bit b + <v, s restricted to samp(u)>.  The label
is b.

Instances flatten to symbol vectors over GF(2^ell); adversaries are
budgeted in Hamming distance on that flattening.  The ground-truth label
of a perturbed instance is always the label of the instance before
perturbation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from .coding import RsCode, plan_wrap, rs_encode, rs_unique_decode, wrap_decode, wrap_encode
from .crypto import OtsParams, ToyPrg, ots_gen, ots_sign, prg_expand
from .field import Bits, FieldParams, gf2_inner
from .rng import stream_bits, stream_symbols
from .sampler import SubsetSampler, default_seed_bits, samp


@dataclass(frozen=True)
class TaskParams1:
    """Geometry of task 1; budget is floor((1-R) n / 2) symbols."""

    lam: int
    ell: int
    n: int
    k: int
    alpha: int
    beta: int

    def __post_init__(self):
        if not self.lam <= self.alpha <= self.beta:
            raise ValueError("need lambda <= alpha <= beta")
        if self.k * self.ell > self.alpha or self.n * self.ell > self.beta:
            raise ValueError("secret strings too short for the sampled restrictions")
        if not self.k / self.n < 1 / 3:
            raise ValueError("rate must stay below 1/3")
        for wrap in (self.wrap_u1, self.wrap_u2):
            if wrap.correct_radius < self.budget + 1:
                raise ValueError("wrapper cannot outlast the adversary budget")
        if 2 * self.budget >= self.enc.distance:
            raise ValueError("budget must stay below half the code distance")

    @property
    def field(self) -> FieldParams:
        return FieldParams(self.ell)

    @property
    def enc(self) -> RsCode:
        return RsCode(self.field, self.n, self.k)

    @property
    def budget(self) -> int:
        return (self.n - self.k) // 2

    @property
    def r1(self) -> int:
        return default_seed_bits(self.alpha)

    @property
    def r2(self) -> int:
        return default_seed_bits(self.beta)

    @property
    def samp1(self) -> SubsetSampler:
        return SubsetSampler(self.r1, self.alpha, self.k * self.ell, "samp1")

    @property
    def samp2(self) -> SubsetSampler:
        return SubsetSampler(self.r2, self.beta, self.n * self.ell, "samp2")

    @property
    def wrap_u1(self):
        return plan_wrap(self.field, self.r1, self.budget + 1)

    @property
    def wrap_u2(self):
        return plan_wrap(self.field, self.r2, self.budget + 1)

    @property
    def f1(self) -> ToyPrg:
        return ToyPrg(self.lam, self.alpha, "f1")

    @property
    def f2(self) -> ToyPrg:
        return ToyPrg(self.lam, self.beta, "f2")

    def manifest(self) -> tuple:
        segs = (
            ("u1_enc", self.wrap_u1.total_symbols),
            ("u2_enc", self.wrap_u2.total_symbols),
            ("m", self.k),
            ("masked", self.n),
        )
        out = []
        off = 0
        for name, length in segs:
            out.append((name, off, length))
            off += length
        return tuple(out)


@dataclass(frozen=True)
class Instance1:
    u1_enc: np.ndarray
    u2_enc: np.ndarray
    m: np.ndarray
    masked: np.ndarray


@dataclass(frozen=True)
class TaskParams2:
    """Geometry of task 2; budget is floor((1-sqrt(R)) n) symbols."""

    lam: int
    ell: int
    n: int
    k: int
    alpha: int
    hash_bits: int

    def __post_init__(self):
        if not self.lam <= self.alpha:
            raise ValueError("need lambda <= alpha")
        if self.n > self.alpha:
            raise ValueError("secret string too short for the sampled restriction")
        if not self.k / self.n < 1 / 4:
            raise ValueError("rate must stay below 1/4")
        if self.n % 2:
            raise ValueError("block length must be even")
        if self.sig_payload_bits < 2:
            raise ValueError("signature block too small for a bit plus a preimage")
        if self.lenc.list_radius_limit < self.budget:
            raise ValueError("list decoding radius below the adversary budget")
        for wrap in (self.wrap_u, self.wrap_v, self.wrap_vk, self.wrap_bit):
            if wrap.correct_radius < self.budget + 1:
                raise ValueError("wrapper cannot outlast the adversary budget")

    @property
    def field(self) -> FieldParams:
        return FieldParams(self.ell)

    @property
    def lenc(self) -> RsCode:
        return RsCode(self.field, self.n, self.k)

    @property
    def budget(self) -> int:
        return self.n - math.isqrt(self.k * self.n - 1) - 1

    @property
    def sig_payload_bits(self) -> int:
        return self.k * self.ell

    @property
    def ots(self) -> OtsParams:
        # The signature must fit next to the bit inside k symbols, so the
        # preimage (signature) width is k*ell - 1 while the verification
        # hash keeps its configured width.
        return OtsParams(self.hash_bits, self.sig_payload_bits - 1)

    @property
    def r(self) -> int:
        return default_seed_bits(self.alpha)

    @property
    def samp(self) -> SubsetSampler:
        return SubsetSampler(self.r, self.alpha, self.n, "samp")

    @property
    def wrap_u(self):
        return plan_wrap(self.field, self.r, self.budget + 1)

    @property
    def wrap_v(self):
        return plan_wrap(self.field, self.n, self.budget + 1)

    @property
    def wrap_vk(self):
        return plan_wrap(self.field, 2 * self.hash_bits, self.budget + 1)

    @property
    def wrap_bit(self):
        return plan_wrap(self.field, 1, self.budget + 1)

    def manifest(self) -> tuple:
        segs = (
            ("u_enc", self.wrap_u.total_symbols),
            ("v_enc", self.wrap_v.total_symbols),
            ("vk_enc", self.wrap_vk.total_symbols),
            ("sig_block", self.n),
            ("bit_enc", self.wrap_bit.total_symbols),
        )
        out = []
        off = 0
        for name, length in segs:
            out.append((name, off, length))
            off += length
        return tuple(out)


@dataclass(frozen=True)
class Instance2:
    u_enc: np.ndarray
    v_enc: np.ndarray
    vk_enc: np.ndarray
    sig_block: np.ndarray
    bit_enc: np.ndarray
    # Withheld side channel: never flattened or serialized; only the
    # sk-oracle attack mode may read it.
    secret_sk: tuple | None = dc_field(default=None, compare=False)

    def without_secrets(self) -> "Instance2":
        return replace(self, secret_sk=None)


SEGMENTS1 = ("u1_enc", "u2_enc", "m", "masked")
SEGMENTS2 = ("u_enc", "v_enc", "vk_enc", "sig_block", "bit_enc")


def flatten(x) -> np.ndarray:
    if isinstance(x, Instance1):
        names = SEGMENTS1
    elif isinstance(x, Instance2):
        names = SEGMENTS2
    else:
        raise TypeError(f"not an instance: {type(x)}")
    return np.concatenate([getattr(x, name) for name in names]).astype(np.uint16)


def unflatten(vec, params) -> "Instance1 | Instance2":
    vec = np.asarray(vec, dtype=np.uint16)
    manifest = params.manifest()
    total = sum(length for _, _, length in manifest)
    if vec.shape != (total,):
        raise ValueError(f"flat instance must have {total} symbols, got {vec.shape}")
    parts = {name: vec[off : off + length].copy() for name, off, length in manifest}
    if isinstance(params, TaskParams1):
        return Instance1(**parts)
    return Instance2(**parts)


def hamming(a, b) -> int:
    fa, fb = flatten(a), flatten(b)
    if fa.shape != fb.shape:
        raise ValueError("layout mismatch")
    return int(np.count_nonzero(fa != fb))


def mask_symbols(bits: Bits, params: TaskParams1) -> np.ndarray:
    """Reinterpret an n*ell-bit restriction as n field symbols."""
    return bits.to_symbols(params.ell)


@dataclass(frozen=True)
class C1Oracle:
    """Task-1 instance sampler for a fixed pair of secret strings.

    `from_seed` follows the construction (both strings expanded from one
    seed); `from_strings` plants explicit strings, which is how the
    information-theoretically hard fixtures (truly uniform P or Q) are
    built.
    """

    params: TaskParams1
    p_bits: Bits
    q_bits: Bits

    def __post_init__(self):
        if self.p_bits.n != self.params.alpha or self.q_bits.n != self.params.beta:
            raise ValueError("secret string lengths must match alpha, beta")

    @classmethod
    def from_seed(cls, params: TaskParams1, seed: Bits) -> "C1Oracle":
        return cls(params, prg_expand(seed, params.f1), prg_expand(seed, params.f2))

    @classmethod
    def from_strings(cls, params: TaskParams1, p_bits: Bits, q_bits: Bits) -> "C1Oracle":
        return cls(params, p_bits, q_bits)

    def sample(self, rng: np.random.Generator):
        pr = self.params
        u1 = Bits(stream_bits(rng, pr.r1), pr.r1)
        u2 = Bits(stream_bits(rng, pr.r2), pr.r2)
        m = stream_symbols(rng, pr.k, pr.ell)
        mask = mask_symbols(self.q_bits.restrict(samp(u2, pr.samp2)), pr)
        masked = rs_encode(m, pr.enc) ^ mask
        x = Instance1(
            u1_enc=wrap_encode(u1, pr.wrap_u1),
            u2_enc=wrap_encode(u2, pr.wrap_u2),
            m=m,
            masked=masked,
        )
        return x, self._label(u1, m)

    def _label(self, u1: Bits, m: np.ndarray) -> int:
        pr = self.params
        return gf2_inner(
            Bits.from_symbols(m, pr.ell), self.p_bits.restrict(samp(u1, pr.samp1))
        )

    def label_of(self, x: Instance1) -> int:
        """Hypothesis value on an instance (decodes the u1 wrapper)."""
        pr = self.params
        u1 = wrap_decode(x.u1_enc, pr.wrap_u1)
        return self._label(u1, x.m)


def sample_c1(seed: Bits, params: TaskParams1, rng: np.random.Generator):
    return C1Oracle.from_seed(params, seed).sample(rng)


def label_c1(x: Instance1, seed: Bits, params: TaskParams1) -> int:
    return C1Oracle.from_seed(params, seed).label_of(x)


@dataclass(frozen=True)
class C2Oracle:
    """Task-2 instance sampler for a fixed secret string s of alpha bits."""

    params: TaskParams2
    s_bits: Bits

    def __post_init__(self):
        if self.s_bits.n != self.params.alpha:
            raise ValueError("secret string length must match alpha")

    @classmethod
    def from_secret(cls, params: TaskParams2, s_bits: Bits) -> "C2Oracle":
        return cls(params, s_bits)

    def sample(self, rng: np.random.Generator):
        pr = self.params
        u = Bits(stream_bits(rng, pr.r), pr.r)
        v = Bits(stream_bits(rng, pr.n), pr.n)
        keys = ots_gen(pr.ots, rng)
        b = int(rng.integers(2))
        sig = ots_sign(keys, b)
        payload = Bits(b | (sig << 1), pr.sig_payload_bits)
        sig_block = rs_encode(payload.to_symbols(pr.ell), pr.lenc)
        inner = gf2_inner(v, self.s_bits.restrict(samp(u, pr.samp)))
        x = Instance2(
            u_enc=wrap_encode(u, pr.wrap_u),
            v_enc=wrap_encode(v, pr.wrap_v),
            vk_enc=wrap_encode(
                Bits(keys.vk[0] | (keys.vk[1] << pr.hash_bits), 2 * pr.hash_bits),
                pr.wrap_vk,
            ),
            sig_block=sig_block,
            bit_enc=wrap_encode(Bits(b ^ inner, 1), pr.wrap_bit),
            secret_sk=keys.sk,
        )
        return x, b


def sample_c2(s_bits: Bits, params: TaskParams2, rng: np.random.Generator):
    return C2Oracle.from_secret(params, s_bits).sample(rng)


def unpack_sig_payload(msg, params: TaskParams2):
    """Split a decoded signature-block message into (bit, signature).

    Returns None if the zero padding is violated (the candidate cannot
    be a well-formed pair).
    """
    packed = Bits.from_symbols(msg, params.ell, params.sig_payload_bits)
    bit = packed.value & 1
    sig = packed.value >> 1
    if sig >> params.ots.preimage_bits:
        return None
    return bit, sig


def decode_vk(x: Instance2, params: TaskParams2) -> tuple:
    raw = wrap_decode(x.vk_enc, params.wrap_vk)
    mask = (1 << params.hash_bits) - 1
    return (raw.value & mask, (raw.value >> params.hash_bits) & mask)


def true_sig_pair(x: Instance2, params: TaskParams2):
    """(b, sig) from an unperturbed signature block (exact codeword)."""
    msg = rs_unique_decode(x.sig_block, params.lenc)
    pair = unpack_sig_payload(msg, params)
    if pair is None:
        raise ValueError("signature block does not carry a well-formed pair")
    return pair


PRESETS1 = {
    "c1-tiny": TaskParams1(lam=8, ell=3, n=7, k=2, alpha=32, beta=64),
    "c1-small": TaskParams1(lam=12, ell=4, n=15, k=4, alpha=256, beta=1024),
}

PRESETS2 = {
    "c2-small": TaskParams2(lam=12, ell=4, n=16, k=3, alpha=256, hash_bits=16),
}


def get_preset(name: str, hash_bits: int | None = None):
    if name in PRESETS1:
        return PRESETS1[name]
    if name in PRESETS2:
        params = PRESETS2[name]
        if hash_bits is not None:
            params = replace(params, hash_bits=hash_bits)
        return params
    raise KeyError(f"unknown preset {name!r}; have "
                   f"{sorted(PRESETS1) + sorted(PRESETS2)}")


def instance_to_payload(x, params) -> dict:
    names = SEGMENTS1 if isinstance(x, Instance1) else SEGMENTS2
    return {
        "kind": "c1" if isinstance(x, Instance1) else "c2",
        "segments": {name: [int(v) for v in getattr(x, name)] for name in names},
        "manifest": [list(entry) for entry in params.manifest()],
    }


def instance_from_payload(payload: dict, params):
    names = SEGMENTS1 if payload["kind"] == "c1" else SEGMENTS2
    parts = {
        name: np.array(payload["segments"][name], dtype=np.uint16) for name in names
    }
    cls = Instance1 if payload["kind"] == "c1" else Instance2
    return cls(**parts)
