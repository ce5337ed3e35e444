"""NumPy fallback implementations of the hot finite-field kernels.

Semantics contract shared with the compiled backend (`_ckernels`):

* field elements are uint16 values < 2**ell, multiplication goes through
  log/exp tables (``log`` has a junk entry at index 0, zeros are handled
  explicitly; ``exp`` is doubled so index sums never need a modulo);
* ``rref`` is full Gauss-Jordan with leftmost-column, topmost-row pivot
  choice, which makes solutions canonical across backends;
* ``fisher_yates_subset`` consumes masked-rejection draws from a word
  stream in a fixed order, so a given stream always yields the same
  subset.

Both backends must return bit-identical results; the benchmark and the
test suite check this.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"


class StreamExhausted(Exception):
    """Word stream ran out before the shuffle finished."""


def gf_mul_vec(a, b, log, exp):
    """Elementwise product of uint16 arrays (broadcastable)."""
    a = np.asarray(a, dtype=np.uint16)
    b = np.asarray(b, dtype=np.uint16)
    out = exp[log[a] + log[b]]
    zero = (a == 0) | (b == 0)
    if zero.ndim == 0:
        return np.uint16(0) if zero else np.uint16(out)
    out = np.where(zero, np.uint16(0), out)
    return out


def poly_eval(coeffs, xs, log, exp):
    """Evaluate sum c[i] x^i (Horner) at each point of xs."""
    xs = np.asarray(xs, dtype=np.uint16)
    acc = np.zeros_like(xs)
    for c in coeffs[::-1]:
        acc = gf_mul_vec(acc, xs, log, exp)
        acc ^= np.uint16(c)
    return acc


def _rref(m, log, exp):
    """In-place reduced row echelon form; returns list of pivot columns."""
    rows, cols = m.shape
    qm1 = len(exp) // 2
    pivots = []
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(m[rank:, c])[0]
        if nz.size == 0:
            continue
        r = rank + int(nz[0])
        if r != rank:
            m[[rank, r]] = m[[r, rank]]
        inv = exp[qm1 - log[m[rank, c]]]
        m[rank] = gf_mul_vec(m[rank], inv, log, exp)
        col = m[:, c].copy()
        col[rank] = 0
        upd = np.nonzero(col)[0]
        if upd.size:
            factors = col[upd]
            prod = exp[log[factors][:, None] + log[m[rank]][None, :]]
            prod = np.where(m[rank][None, :] == 0, np.uint16(0), prod)
            m[upd] ^= prod
        pivots.append(c)
        rank += 1
    return pivots


def gauss_solve(a, b, log, exp):
    """Solve a x = b over the field; free variables 0; None if inconsistent."""
    a = np.ascontiguousarray(a, dtype=np.uint16)
    b = np.asarray(b, dtype=np.uint16)
    rows, cols = a.shape
    m = np.empty((rows, cols + 1), dtype=np.uint16)
    m[:, :cols] = a
    m[:, cols] = b
    pivots = _rref(m, log, exp)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.uint16)
    for r, c in enumerate(pivots):
        x[c] = m[r, cols]
    return x


def gauss_nullvec(a, log, exp):
    """A nonzero null-space vector of a, or None if a has full column rank.

    Canonical choice: set the first free column to 1, all other free
    columns to 0, and back-substitute.
    """
    m = np.ascontiguousarray(a, dtype=np.uint16).copy()
    rows, cols = m.shape
    pivots = _rref(m, log, exp)
    pivot_set = set(pivots)
    free = next((c for c in range(cols) if c not in pivot_set), None)
    if free is None:
        return None
    x = np.zeros(cols, dtype=np.uint16)
    x[free] = 1
    for r, c in enumerate(pivots):
        x[c] = m[r, free]
    return x


def fisher_yates_subset(words, n, t):
    """First t entries of a word-stream-driven partial shuffle of range(n).

    Each position draws by masked rejection: the draw for span s uses the
    low bits of successive words under the smallest all-ones mask >= s-1,
    rejecting values >= s.  Returns the subset in ascending order.
    """
    perm = np.arange(n, dtype=np.int64)
    pos = 0
    limit = len(words)
    for i in range(t):
        span = n - i
        mask = (1 << int(span - 1).bit_length()) - 1 if span > 1 else 0
        while True:
            if pos >= limit:
                raise StreamExhausted
            w = int(words[pos]) & mask
            pos += 1
            if w < span:
                break
        j = i + w
        perm[i], perm[j] = perm[j], perm[i]
    out = np.sort(perm[:t])
    return out
