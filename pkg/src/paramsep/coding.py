"""Reed-Solomon encoding, unique decoding, list decoding, and wrappers.

Codewords are uint16 arrays of length ``code.n``; messages are uint16
arrays of length ``code.k`` holding the polynomial coefficients in
ascending order (message symbol 0 is the constant term).

The unique decoder is Berlekamp-Welch rational interpolation.  The list
decoder is Guruswami-Sudan, with the interpolation multiplicity chosen
minimally for the requested radius and y-roots extracted by the
Roth-Ruckenstein recursion; its output is verified complete against
brute-force ball enumeration in the tests.

``WrapCode`` carries a binary payload inside one or more Reed-Solomon
chunks, each repeated an odd number of times and decoded by majority
vote, which is how a guaranteed correction radius beyond what a single
block of the field supports is reached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .field import Bits, FieldParams


class DecodeFailure(Exception):
    """No codeword within the requested radius."""


#: Sentinel evaluation point at infinity, where a polynomial of degree
#: < k evaluates to its top coefficient.  Used only when a block length
#: of 2^ell + 1 is requested; the code stays MDS.
INF_POINT = -1


@dataclass(frozen=True)
class RsCode:
    """Reed-Solomon code over GF(2^ell) with fixed evaluation points.

    Default evaluation points are the first n nonzero field elements in
    value order; when n reaches the field size, 0 is appended as the last
    point (there are only 2^ell - 1 nonzero elements), and for
    n = 2^ell + 1 the point at infinity follows (doubly-extended code).
    """

    field: FieldParams
    n: int
    k: int
    eval_points: tuple = ()

    def __post_init__(self):
        q = self.field.order
        if not 1 <= self.k <= min(self.n, q) or self.n > q + 1:
            raise ValueError(f"need 1 <= k <= n <= {q + 1}, got k={self.k}, n={self.n}")
        if not self.eval_points:
            if self.n < q:
                pts = tuple(range(1, self.n + 1))
            else:
                pts = (tuple(range(1, q)) + (0, INF_POINT))[: self.n]
            object.__setattr__(self, "eval_points", pts)
        if len(set(self.eval_points)) != self.n or len(self.eval_points) != self.n:
            raise ValueError("evaluation points must be n distinct field elements")
        if any(x != INF_POINT and not 0 <= x < q for x in self.eval_points):
            raise ValueError("evaluation point outside the field")
        if self.eval_points.count(INF_POINT) and self.eval_points[-1] != INF_POINT:
            raise ValueError("the infinity point must come last")

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def distance(self) -> int:
        return self.n - self.k + 1

    @property
    def unique_radius(self) -> int:
        return (self.n - self.k) // 2

    @property
    def list_radius_limit(self) -> int:
        return self.n - math.isqrt(self.k * self.n - 1) - 1

    @property
    def has_inf(self) -> bool:
        return bool(self.eval_points) and self.eval_points[-1] == INF_POINT

    @property
    def finite_points(self) -> tuple:
        return self.eval_points[:-1] if self.has_inf else self.eval_points

    def points_array(self) -> np.ndarray:
        return np.array(self.finite_points, dtype=np.uint16)

    def power_table(self, max_deg: int) -> np.ndarray:
        """pw[i, j] = finite eval point i to the power j, j in [0, max_deg]."""
        return _power_table(self, max_deg)


@lru_cache(maxsize=None)
def _power_table(code: RsCode, max_deg: int) -> np.ndarray:
    xs = code.points_array()
    pw = np.ones((len(xs), max_deg + 1), dtype=np.uint16)
    for j in range(1, max_deg + 1):
        pw[:, j] = code.field.mul_vec(pw[:, j - 1], xs)
    pw.setflags(write=False)
    return pw


def rs_encode(msg, code: RsCode) -> np.ndarray:
    msg = np.asarray(msg, dtype=np.uint16)
    if msg.shape != (code.k,):
        raise ValueError(f"message must have {code.k} symbols, got {msg.shape}")
    vals = code.field.poly_eval_vec(msg, code.points_array())
    if not code.has_inf:
        return vals
    out = np.empty(code.n, dtype=np.uint16)
    out[:-1] = vals
    out[-1] = msg[code.k - 1]
    return out


def _poly_divmod(num, den, fp: FieldParams):
    """Quotient and remainder of polynomials (ascending coefficients)."""
    num = list(int(c) for c in num)
    den = list(int(c) for c in den)
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    dd = len(den) - 1
    lead_inv = fp.inv(den[-1])
    quot = [0] * max(len(num) - dd, 0)
    rem = num[:]
    for i in range(len(rem) - 1, dd - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        q = fp.mul(c, lead_inv)
        quot[i - dd] = q
        for j, dcoef in enumerate(den):
            rem[i - dd + j] ^= fp.mul(q, dcoef)
    while rem and rem[-1] == 0:
        rem.pop()
    return quot, rem


def _hd(a, b) -> int:
    return int(np.count_nonzero(np.asarray(a) != np.asarray(b)))


def rs_unique_decode(word, code: RsCode) -> np.ndarray:
    """Nearest message within (n-k)//2 errors, or DecodeFailure."""
    w = np.asarray(word, dtype=np.uint16)
    if w.shape != (code.n,):
        raise ValueError(f"word must have {code.n} symbols, got {w.shape}")
    fp = code.field
    n, k = code.n, code.k
    t = code.unique_radius
    if code.has_inf:
        for msg in _inf_candidates(w, code, t, unique=True):
            if _hd(rs_encode(msg, code), w) <= t:
                return msg
        raise DecodeFailure("no codeword within the unique radius")
    if t == 0:
        pw = code.power_table(k - 1)
        msg = fp.solve(pw[:k, :k], w[:k])
        if msg is None:
            raise DecodeFailure("interpolation failed")
        if np.any(rs_encode(msg, code) != w):
            raise DecodeFailure("word is not a codeword and radius is 0")
        return msg
    pw = code.power_table(k + t)
    # Q(x_i) = y_i * E(x_i) with E monic of degree t:
    # sum_j q_j x^j + y_i sum_{j<t} e_j x^j = y_i x^t   (char 2)
    a = np.empty((n, k + 2 * t), dtype=np.uint16)
    a[:, : k + t] = pw[:, : k + t]
    ypow = fp.mul_vec(w[:, None], pw[:, : t + 1])
    a[:, k + t :] = ypow[:, :t]
    sol = fp.solve(a, ypow[:, t])
    if sol is None:
        raise DecodeFailure("no codeword within the unique radius")
    qpoly = sol[: k + t]
    epoly = list(int(c) for c in sol[k + t :]) + [1]
    fcoef, rem = _poly_divmod(qpoly, epoly, fp)
    if rem:
        raise DecodeFailure("no codeword within the unique radius")
    msg = np.zeros(k, dtype=np.uint16)
    if len(fcoef) > k:
        raise DecodeFailure("degree overflow")
    msg[: len(fcoef)] = fcoef
    if int(np.count_nonzero(rs_encode(msg, code) != w)) > t:
        raise DecodeFailure("no codeword within the unique radius")
    return msg


def pack_message(msg, ell: int) -> int:
    """Canonical integer packing used for list ordering and ties."""
    return Bits.from_symbols(msg, ell).value


def _inf_candidates(w, code: RsCode, radius: int, unique: bool) -> list:
    """Candidate messages for a doubly-extended code, by case split on
    whether the infinity symbol (= top coefficient) is in error."""
    fp = code.field
    n, k = code.n, code.k
    finite = w[:-1]
    cands = []
    top = int(w[-1])
    if k == 1:
        cands.append(np.array([top], dtype=np.uint16))
    else:
        shift = fp.mul_vec(np.uint16(top), code.power_table(k - 1)[:, k - 1])
        sub = RsCode(fp, n - 1, k - 1, code.finite_points)
        for m in _decode_sub(finite ^ shift, sub, radius, unique):
            cands.append(np.concatenate([m, [top]]).astype(np.uint16))
    if radius >= 1:
        sub2 = RsCode(fp, n - 1, k, code.finite_points)
        cands.extend(_decode_sub(finite, sub2, radius - 1, unique))
    return cands


def _decode_sub(w, code: RsCode, radius: int, unique: bool) -> list:
    if unique:
        try:
            return [rs_unique_decode(w, code)]
        except DecodeFailure:
            return []
    if radius > code.list_radius_limit:
        raise ValueError("radius not supported at this extended block length")
    return rs_list_decode(w, code, radius)


@dataclass(frozen=True)
class _GsPlan:
    mult: int
    wdeg: int
    ymax: int
    mono_x: np.ndarray
    mono_y: np.ndarray
    # one entry per derivative order (r, s): precomputed x-side factors
    classes: tuple


@lru_cache(maxsize=None)
def _gs_plan(code: RsCode, radius: int) -> _GsPlan:
    n, k = code.n, code.k
    agree = n - radius
    for mult in range(1, 65):
        wdeg = mult * agree - 1
        constraints = n * mult * (mult + 1) // 2
        ymax = wdeg // (k - 1)
        monos = [(xi, yj) for yj in range(ymax + 1) for xi in range(wdeg - yj * (k - 1) + 1)]
        if len(monos) > constraints:
            break
    else:
        raise ValueError("interpolation multiplicity search exhausted")
    mono_x = np.array([m[0] for m in monos], dtype=np.int64)
    mono_y = np.array([m[1] for m in monos], dtype=np.int64)
    pw = code.power_table(wdeg)
    classes = []
    for r in range(mult):
        for s in range(mult - r):
            # Hasse derivative of order (r, s): monomial (xi, yj) contributes
            # C(xi, r) C(yj, s) x^(xi-r) y^(yj-s); binomials are mod-2 (Lucas).
            ok = (mono_x >= r) & (mono_y >= s)
            ok &= (r & ~mono_x) == 0
            ok &= (s & ~mono_y) == 0
            xfac = np.zeros((n, len(monos)), dtype=np.uint16)
            cols = np.nonzero(ok)[0]
            xfac[:, cols] = pw[:, mono_x[cols] - r]
            yexp = np.where(ok, mono_y - s, 0)
            classes.append((r, s, xfac, yexp.astype(np.int64)))
    return _GsPlan(
        mult=mult,
        wdeg=wdeg,
        ymax=ymax,
        mono_x=mono_x,
        mono_y=mono_y,
        classes=tuple(classes),
    )


def _y_roots(coef: np.ndarray, fp: FieldParams) -> np.ndarray:
    """Roots of a univariate polynomial by evaluation over the field."""
    xs = np.arange(fp.order, dtype=np.uint16)
    vals = fp.poly_eval_vec(coef, xs)
    return xs[vals == 0]


def _substitute_shift(c: np.ndarray, gamma: int, fp: FieldParams) -> np.ndarray:
    """Transform Q(x, y) into Q(x, x*y + gamma).

    (x y + gamma)^j expands over char 2 as sum over submask-admissible s
    of C(j, s) gamma^(j-s) x^s y^s.
    """
    xdim, ydim = c.shape
    out = np.zeros((xdim + ydim - 1, ydim), dtype=np.uint16)
    tables = fp.tables()
    logt, expt = tables.log, tables.exp
    gpow = [1]
    for _ in range(ydim):
        gpow.append(fp.mul(gpow[-1], gamma))
    for j in range(ydim):
        col = c[:, j]
        if not col.any():
            continue
        for s in range(j + 1):
            if (s & ~j) != 0:  # C(j, s) even
                continue
            g = gpow[j - s]
            if g == 0:
                continue
            if g == 1:
                term = col
            else:
                term = np.where(col == 0, 0, expt[logt[col] + logt[g]]).astype(np.uint16)
            out[s : s + xdim, s] ^= term
    return out


def _strip_x(c: np.ndarray) -> np.ndarray:
    rows = np.nonzero(c.any(axis=1))[0]
    if rows.size == 0:
        return c
    return c[rows[0] :, :]


def rs_list_decode(word, code: RsCode, radius: int) -> list:
    """All messages whose encoding is within `radius` of the word.

    Output is sorted by the packed integer value of the message.
    """
    w = np.asarray(word, dtype=np.uint16)
    if w.shape != (code.n,):
        raise ValueError(f"word must have {code.n} symbols, got {w.shape}")
    if radius < 0 or radius > code.list_radius_limit:
        raise ValueError(
            f"radius {radius} outside supported range [0, {code.list_radius_limit}]"
        )
    fp = code.field
    n, k = code.n, code.k
    if radius <= code.unique_radius:
        try:
            msg = rs_unique_decode(w, code)
        except DecodeFailure:
            return []
        return [msg] if _hd(rs_encode(msg, code), w) <= radius else []
    if k == 1:
        # Codewords are constants (at infinity too); candidates are
        # high-frequency symbols.
        counts = np.bincount(w, minlength=fp.order)
        cands = np.nonzero(counts >= n - radius)[0]
        return [np.array([c], dtype=np.uint16) for c in sorted(cands)]
    if code.has_inf:
        found = {}
        for msg in _inf_candidates(w, code, radius, unique=False):
            if _hd(rs_encode(msg, code), w) <= radius:
                found[pack_message(msg, fp.ell)] = msg
        return [found[key] for key in sorted(found)]
    plan = _gs_plan(code, radius)
    ydim = plan.ymax + 1
    ypow = np.ones((n, ydim + 1), dtype=np.uint16)
    for j in range(1, ydim + 1):
        ypow[:, j] = fp.mul_vec(ypow[:, j - 1], w)
    rows = []
    for r, s, xfac, yexp in plan.classes:
        yfac = ypow[np.arange(n)[:, None], yexp[None, :]]
        rows.append(fp.mul_vec(xfac, yfac))
    a = np.concatenate(rows, axis=0)
    coeffs = fp.nullvec(a)
    if coeffs is None:
        raise AssertionError("interpolation system has full rank; plan is wrong")
    qxy = np.zeros((plan.wdeg + 1, ydim), dtype=np.uint16)
    qxy[plan.mono_x, plan.mono_y] = coeffs
    found = {}
    stack = [(_strip_x(qxy), ())]
    while stack:
        c, prefix = stack.pop()
        depth = len(prefix)
        for gamma in _y_roots(c[0, :], fp):
            ext = prefix + (int(gamma),)
            if depth == k - 1:
                msg = np.array(ext, dtype=np.uint16)
                dist = int(np.count_nonzero(rs_encode(msg, code) != w))
                if dist <= radius:
                    found[pack_message(msg, fp.ell)] = msg
            else:
                stack.append((_strip_x(_substitute_shift(c, int(gamma), fp)), ext))
    return [found[key] for key in sorted(found)]


def brute_force_ball(word, code: RsCode, radius: int) -> list:
    """Oracle: enumerate every message and keep those within the radius.

    Independent of the interpolation decoder; exponential in k*ell.
    """
    w = np.asarray(word, dtype=np.uint16)
    q = code.field.order
    total = q**code.k
    if total > 1 << 20:
        raise ValueError("message space too large for brute force")
    out = []
    for packed in range(total):
        msg = np.array([(packed >> (j * code.field.ell)) & (q - 1) for j in range(code.k)],
                       dtype=np.uint16)
        if int(np.count_nonzero(rs_encode(msg, code) != w)) <= radius:
            out.append(msg)
    return out


@dataclass(frozen=True)
class WrapCode:
    """Binary payload carried by repeated Reed-Solomon chunks.

    The payload is packed ell bits per symbol (zero-padded tail), split
    into chunks of `chunk_dim` symbols, and each chunk's codeword is
    written `copies` times.  Decoding takes a per-chunk majority over the
    copies that unique-decode, which tolerates `correct_radius` symbol
    errors across the whole wrapper.
    """

    field: FieldParams
    payload_bits: int
    chunk_dim: int
    chunk_len: int
    copies: int
    correct_radius: int
    inner: RsCode = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.payload_bits < 1:
            raise ValueError("payload must be at least one bit")
        if self.copies % 2 == 0:
            raise ValueError("copies must be odd for majority decoding")
        object.__setattr__(
            self, "inner", RsCode(self.field, self.chunk_len, self.chunk_dim)
        )
        t = self.inner.unique_radius
        guaranteed = (t + 1) * ((self.copies + 1) // 2) - 1
        if guaranteed < self.correct_radius:
            raise ValueError(
                f"geometry only guarantees {guaranteed} corrections, "
                f"{self.correct_radius} declared"
            )

    @property
    def payload_symbols(self) -> int:
        return (self.payload_bits + self.field.ell - 1) // self.field.ell

    @property
    def n_chunks(self) -> int:
        return (self.payload_symbols + self.chunk_dim - 1) // self.chunk_dim

    @property
    def total_symbols(self) -> int:
        return self.n_chunks * self.copies * self.chunk_len


def plan_wrap(field: FieldParams, payload_bits: int, min_radius: int) -> WrapCode:
    """Pick wrapper geometry guaranteeing more than min_radius - 1 ... i.e.
    at least `min_radius` correctable symbol errors, minimizing total length.
    """
    q = field.order
    payload_syms = max(1, (payload_bits + field.ell - 1) // field.ell)
    if min_radius == 0:
        return WrapCode(field, payload_bits, min(payload_syms, q), min(payload_syms, q), 1, 0)
    single_dim = q - 2 * min_radius
    if single_dim >= 1:
        # One copy per chunk suffices; use the widest chunk that fits.
        k_c = min(payload_syms, single_dim)
        return WrapCode(field, payload_bits, k_c, k_c + 2 * min_radius, 1, min_radius)
    best = None
    for k_c in range(1, min(payload_syms, q) + 1):
        for n_c in range(k_c, q + 1):
            t = (n_c - k_c) // 2
            half = -(-(min_radius + 1) // (t + 1))  # ceil
            copies = 2 * half - 1
            cost = -(-payload_syms // k_c) * copies * n_c
            key = (cost, copies, n_c, -k_c)
            if best is None or key < best[0]:
                best = (key, (k_c, n_c, copies))
    k_c, n_c, copies = best[1]
    return WrapCode(field, payload_bits, k_c, n_c, copies, min_radius)


def wrap_encode(payload: Bits, wc: WrapCode) -> np.ndarray:
    if payload.n != wc.payload_bits:
        raise ValueError(f"payload must be {wc.payload_bits} bits, got {payload.n}")
    syms = payload.to_symbols(wc.field.ell)
    padded = np.zeros(wc.n_chunks * wc.chunk_dim, dtype=np.uint16)
    padded[: len(syms)] = syms
    out = np.empty(wc.total_symbols, dtype=np.uint16)
    pos = 0
    for c in range(wc.n_chunks):
        cw = rs_encode(padded[c * wc.chunk_dim : (c + 1) * wc.chunk_dim], wc.inner)
        for _ in range(wc.copies):
            out[pos : pos + wc.chunk_len] = cw
            pos += wc.chunk_len
    return out


def wrap_decode(word, wc: WrapCode) -> Bits:
    w = np.asarray(word, dtype=np.uint16)
    if w.shape != (wc.total_symbols,):
        raise ValueError(f"wrapper word must have {wc.total_symbols} symbols")
    syms = np.empty(wc.n_chunks * wc.chunk_dim, dtype=np.uint16)
    pos = 0
    bare = wc.chunk_len == 1 and wc.chunk_dim == 1
    for c in range(wc.n_chunks):
        votes = {}
        for _ in range(wc.copies):
            copy = w[pos : pos + wc.chunk_len]
            pos += wc.chunk_len
            if bare:  # length-1 chunks decode to themselves
                msg = copy
            else:
                try:
                    msg = rs_unique_decode(copy, wc.inner)
                except DecodeFailure:
                    continue
            key = pack_message(msg, wc.field.ell)
            votes[key] = (votes.get(key, (0, None))[0] + 1, msg)
        winner = None
        for key, (count, msg) in votes.items():
            if count * 2 > wc.copies:
                winner = msg
        if winner is None:
            raise DecodeFailure(f"no majority for wrapper chunk {c}")
        syms[c * wc.chunk_dim : (c + 1) * wc.chunk_dim] = winner
    return Bits.from_symbols(syms, wc.field.ell, wc.payload_bits)
