"""Deterministic, splittable random streams for experiments.

Every random decision in an experiment draws from a named stream derived
from (root seed, path).  Streams are backed by the Philox counter-based
generator, keyed by a SHA-256 digest of the path, so the stream a trial
sees depends only on its name, never on execution order or worker count.
"""

from __future__ import annotations

import hashlib

import numpy as np

GENERATOR_NAME = "philox4x64/sha256-path"


def _key_words(seed: int, path: tuple) -> np.ndarray:
    tag = ("%d/" % seed + "/".join(str(p) for p in path)).encode()
    digest = hashlib.sha256(b"paramsep.stream:" + tag).digest()
    return np.frombuffer(digest[:16], dtype=np.uint64).copy()


def stream(seed: int, *path) -> np.random.Generator:
    """Return the generator for (seed, *path); same args, same stream."""
    return np.random.Generator(np.random.Philox(key=_key_words(seed, path)))


def stream_bits(rng: np.random.Generator, nbits: int) -> int:
    """Draw nbits uniform bits as an int (bit i of the result = draw i)."""
    if nbits == 0:
        return 0
    nbytes = (nbits + 7) // 8
    raw = rng.bytes(nbytes)
    return int.from_bytes(raw, "little") & ((1 << nbits) - 1)


def stream_symbols(rng: np.random.Generator, count: int, ell: int) -> np.ndarray:
    """Draw `count` uniform field symbols of width ell bits."""
    return rng.integers(0, 1 << ell, size=count, dtype=np.uint16)
