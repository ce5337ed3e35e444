"""Arithmetic over GF(2) and GF(2^ell).

Field elements are plain integers in [0, 2^ell) whose bit i is the
coefficient of x^i in the polynomial basis; addition is XOR.  Scalar
multiplication is carry-less shift-XOR with on-the-fly reduction; vector
operations go through log/exp tables shared with the kernel backends.

Bit strings over GF(2) (messages, seeds, PRG outputs, restrictions) are
`Bits` values: an arbitrary-precision integer plus an explicit length,
with bit i of the integer holding coordinate i.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels

# Conventional primitive polynomials, one per supported width.  Bit i is
# the coefficient of x^i, including the leading x^ell term.
DEFAULT_MODULI = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011011,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}

MAX_ELL = 16


def _xmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    out = 0
    while a:
        if a & 1:
            out ^= b
        a >>= 1
        b <<= 1
    return out


def _xmod(a: int, m: int) -> int:
    """Remainder of a modulo m in GF(2)[x]."""
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def _is_irreducible(m: int) -> bool:
    """Exhaustive factor search; adequate for degrees up to 16."""
    deg = m.bit_length() - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if not m & 1:  # x divides m
        return False
    for f in range(2, 1 << (deg // 2 + 1)):
        if _xmod(m, f) == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldParams:
    """Parameters of GF(2^ell).

    Parameters
    ----------
    ell : int
        Bit width of the field, 1 <= ell <= 16.
    modulus : int
        Irreducible polynomial of degree ell as an (ell+1)-bit mask.
        Defaults to a conventional primitive polynomial for the width.
    """

    ell: int
    modulus: int = 0

    def __post_init__(self):
        if not 1 <= self.ell <= MAX_ELL:
            raise ValueError(f"field width must be in [1, {MAX_ELL}], got {self.ell}")
        if self.modulus == 0:
            object.__setattr__(self, "modulus", DEFAULT_MODULI[self.ell])
        if self.modulus.bit_length() - 1 != self.ell:
            raise ValueError(
                f"modulus 0b{self.modulus:b} does not have degree {self.ell}"
            )
        if not _is_irreducible(self.modulus):
            raise ValueError(f"modulus 0b{self.modulus:b} is reducible")

    @property
    def order(self) -> int:
        return 1 << self.ell

    def mul(self, a: int, b: int) -> int:
        """Product of two elements (scalar path, no tables needed)."""
        return _xmod(_xmul(a, b), self.modulus)

    def pow(self, a: int, e: int) -> int:
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.order - 2)

    def trace(self, a: int) -> int:
        """Trace map to GF(2): a + a^2 + a^4 + ... + a^(2^(ell-1))."""
        acc = 0
        t = a
        for _ in range(self.ell):
            acc ^= t
            t = self.mul(t, t)
        return acc & 1

    def tables(self) -> "GfTables":
        return _build_tables(self.ell, self.modulus)

    # Vector operations (kernel-backed).

    def mul_vec(self, a, b) -> np.ndarray:
        t = self.tables()
        return _kernels.gf_mul_vec(a, b, t.log, t.exp)

    def poly_eval_vec(self, coeffs, xs) -> np.ndarray:
        t = self.tables()
        return _kernels.poly_eval(
            np.asarray(coeffs, dtype=np.uint16),
            np.asarray(xs, dtype=np.uint16),
            t.log,
            t.exp,
        )

    def solve(self, a, b):
        t = self.tables()
        return _kernels.gauss_solve(a, b, t.log, t.exp)

    def nullvec(self, a):
        t = self.tables()
        return _kernels.gauss_nullvec(a, t.log, t.exp)

    def trace_table(self) -> np.ndarray:
        return self.tables().trace


@dataclass(frozen=True)
class GfTables:
    """log/exp/trace lookup tables for one field instance."""

    ell: int
    log: np.ndarray  # int32[q], junk at index 0
    exp: np.ndarray  # uint16[2(q-1)], doubled to skip the modulo
    trace: np.ndarray  # uint8[q]


@lru_cache(maxsize=None)
def _build_tables(ell: int, modulus: int) -> GfTables:
    p = FieldParams(ell, modulus)
    q = p.order
    exp = np.zeros(2 * (q - 1), dtype=np.uint16)
    log = np.zeros(q, dtype=np.int32)
    g = _find_generator(p)
    x = 1
    for i in range(q - 1):
        exp[i] = x
        log[x] = i
        x = p.mul(x, g)
    exp[q - 1 :] = exp[: q - 1]
    tr = np.array([p.trace(a) for a in range(q)], dtype=np.uint8)
    return GfTables(ell=ell, log=log, exp=exp, trace=tr)


def _find_generator(p: FieldParams) -> int:
    for g in range(2, p.order):
        seen = 1
        x = g
        while x != 1:
            x = p.mul(x, g)
            seen += 1
        if seen == p.order - 1:
            return g
    raise AssertionError("no generator found; modulus not irreducible?")


def ff_mul(a: int, b: int, p: FieldParams) -> int:
    return p.mul(a, b)


def trace(a: int, p: FieldParams) -> int:
    return p.trace(a)


@dataclass(frozen=True)
class Bits:
    """A GF(2) vector: integer value plus explicit bit length."""

    value: int
    n: int

    def __post_init__(self):
        if self.n < 0 or self.value < 0 or self.value >> self.n:
            raise ValueError(f"value does not fit in {self.n} bits")

    @classmethod
    def zeros(cls, n: int) -> "Bits":
        return cls(0, n)

    @classmethod
    def from_bitlist(cls, bits) -> "Bits":
        v = 0
        for i, b in enumerate(bits):
            if b:
                v |= 1 << i
        return cls(v, len(bits))

    @classmethod
    def from_bytes(cls, raw: bytes, n: int) -> "Bits":
        return cls(int.from_bytes(raw, "little") & ((1 << n) - 1), n)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.value >> i) & 1

    def __xor__(self, other: "Bits") -> "Bits":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return Bits(self.value ^ other.value, self.n)

    def concat(self, other: "Bits") -> "Bits":
        return Bits(self.value | (other.value << self.n), self.n + other.n)

    def restrict(self, indices) -> "Bits":
        """Gather the given bit positions, in the order supplied."""
        v = 0
        src = self.value
        for out_i, i in enumerate(indices):
            v |= ((src >> int(i)) & 1) << out_i
        return Bits(v, len(indices))

    def take(self, n: int) -> "Bits":
        """First n bits (zero-extended if n exceeds the length)."""
        return Bits(self.value & ((1 << n) - 1), n)

    def to_symbols(self, ell: int) -> np.ndarray:
        """Pack bits ell at a time (bit j*ell is bit 0 of symbol j)."""
        count = (self.n + ell - 1) // ell
        mask = (1 << ell) - 1
        v = self.value
        return np.array([(v >> (j * ell)) & mask for j in range(count)], dtype=np.uint16)

    @classmethod
    def from_symbols(cls, symbols, ell: int, n: int | None = None) -> "Bits":
        v = 0
        for j, s in enumerate(symbols):
            v |= int(s) << (j * ell)
        total = len(symbols) * ell
        if n is None:
            n = total
        return cls(v & ((1 << n) - 1), n)

    def to_hex(self) -> str:
        nbytes = (self.n + 7) // 8
        return self.value.to_bytes(nbytes, "little").hex()

    @classmethod
    def from_hex(cls, s: str, n: int) -> "Bits":
        return cls.from_bytes(bytes.fromhex(s), n)


def gf2_inner(a: Bits, b: Bits) -> int:
    """Inner product over GF(2): XOR of coordinatewise ANDs."""
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} vs {b.n}")
    return (a.value & b.value).bit_count() & 1
