"""Suffix array, LCP, BWT, runs, phi/LF, and range-minimum queries.

All arrays are 0-based.  The suffix array is built by numpy prefix
doubling (lexsort rounds with early exit); LCP uses the usual ISA-order
scan, compiled with numba.  Nothing here is asymptotically optimal and
nothing needs to be: correctness is pinned against the naive oracle in
brute.py.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import OutOfRange, SizeLimit
from .text import Text

_BLOCK = 32  # RMQ block width


def _suffix_array(data: np.ndarray) -> np.ndarray:
    """Prefix-doubling suffix array over a uint8 array."""
    n = data.shape[0]
    if n == 1:
        return np.zeros(1, np.int32)
    rank = data.astype(np.int64)
    k = 1
    while True:
        second = np.full(n, -1, np.int64)
        second[: n - k] = rank[k:]
        order = np.lexsort((second, rank))
        r1 = rank[order]
        r2 = second[order]
        bump = np.empty(n, np.int64)
        bump[0] = 0
        bump[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        newrank = np.cumsum(bump)
        if newrank[-1] == n - 1:
            return order.astype(np.int32)
        rank[order] = newrank
        k *= 2


@njit(cache=True)
def _kasai(data, sa, isa):
    n = sa.shape[0]
    lcp = np.zeros(n, np.int32)
    h = 0
    for p in range(n):
        r = isa[p]
        if r > 0:
            q = sa[r - 1]
            while p + h < n and q + h < n and data[p + h] == data[q + h]:
                h += 1
            lcp[r] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return lcp


@dataclass
class SuffixContext:
    """Immutable bundle of suffix structures for one text."""

    text: Text
    sa: np.ndarray
    isa: np.ndarray
    lcp: np.ndarray
    bwt: bytes
    run_starts: np.ndarray  # ranks (0-based) where a BWT run begins
    c_table: np.ndarray  # c_table[c] = number of text symbols < c

    @property
    def n(self) -> int:
        return self.text.n

    @property
    def r(self) -> int:
        return len(self.run_starts)


def build_context(t: Text) -> SuffixContext:
    if t.n >= 1 << 31:
        raise SizeLimit("positions are kept in 32 bits; n must be < 2^31")
    data = np.frombuffer(t.data, dtype=np.uint8)
    sa = _suffix_array(data)
    isa = np.empty_like(sa)
    isa[sa] = np.arange(t.n, dtype=np.int32)
    lcp = _kasai(data, sa, isa)
    prev = sa - 1
    prev[prev < 0] = t.n - 1
    bwt_arr = data[prev]
    run_starts = np.flatnonzero(
        np.concatenate(([True], bwt_arr[1:] != bwt_arr[:-1]))
    ).astype(np.int32)
    counts = np.bincount(data, minlength=256).astype(np.int64)
    c_table = np.zeros(257, np.int64)
    np.cumsum(counts, out=c_table[1:])
    return SuffixContext(
        text=t,
        sa=sa,
        isa=isa,
        lcp=lcp,
        bwt=bwt_arr.tobytes(),
        run_starts=run_starts,
        c_table=c_table,
    )


def phi(ctx: SuffixContext, p: int) -> int:
    """Text position whose suffix immediately precedes T[p..] in rank.

    At the smallest suffix it wraps to SA[n-1].
    """
    if not 0 <= p < ctx.n:
        raise OutOfRange(f"position {p} not in 0..{ctx.n - 1}")
    rank = ctx.isa[p]
    return int(ctx.sa[rank - 1]) if rank > 0 else int(ctx.sa[ctx.n - 1])


def phi_array(ctx: SuffixContext) -> np.ndarray:
    out = np.empty(ctx.n, np.int32)
    out[ctx.sa[1:]] = ctx.sa[:-1]
    out[ctx.sa[0]] = ctx.sa[ctx.n - 1]
    return out


def lf(ctx: SuffixContext, i: int) -> int:
    """Rank of the suffix starting one position before SA[i]."""
    if not 0 <= i < ctx.n:
        raise OutOfRange(f"rank {i} not in 0..{ctx.n - 1}")
    c = ctx.bwt[i]
    occ = ctx.bwt.count(bytes([c]), 0, i + 1)
    return int(ctx.c_table[c]) + occ - 1


def lf_array(ctx: SuffixContext) -> np.ndarray:
    bwt = np.frombuffer(ctx.bwt, dtype=np.uint8)
    out = np.empty(ctx.n, np.int64)
    for c in np.unique(bwt):
        where = np.flatnonzero(bwt == c)
        out[where] = ctx.c_table[c] + np.arange(len(where))
    return out


def invert_bwt(ctx: SuffixContext) -> bytes:
    """Rebuild the text from the BWT alone, via repeated LF steps."""
    lfa = lf_array(ctx)
    out = bytearray(ctx.n)
    i = int(ctx.isa[0])
    # T[n-1-k] = BWT[LF^k(ISA[0])]; the BWT char at the text's own rank is T[n-1]
    for k in range(ctx.n):
        out[ctx.n - 1 - k] = ctx.bwt[i]
        i = int(lfa[i])
    return bytes(out)


@njit(cache=True)
def _rmq_scan(values, best, lo, hi):
    for p in range(lo, hi + 1):
        if values[p] < values[best]:
            best = p
    return best


@njit(cache=True)
def rmq_query(values, block_arg, table, i, j):
    """Leftmost position of the minimum of values[i..j], inclusive."""
    bi = i // _BLOCK
    bj = j // _BLOCK
    if bi == bj:
        return _rmq_scan(values, i, i + 1, j)
    best = _rmq_scan(values, i, i + 1, (bi + 1) * _BLOCK - 1)
    lo = bi + 1
    hi = bj - 1
    if lo <= hi:
        span = hi - lo + 1
        level = 0
        while (1 << (level + 1)) <= span:
            level += 1
        a = table[level, lo]
        b = table[level, hi - (1 << level) + 1]
        cand = a
        if values[b] < values[a] or (values[b] == values[a] and b < a):
            cand = b
        if values[cand] < values[best]:
            best = cand
    return _rmq_scan(values, best, bj * _BLOCK, j)


class RmqIndex:
    """Range-minimum index: block argmins plus a sparse table over blocks.

    Ties always resolve to the leftmost position.
    """

    def __init__(self, values):
        values = np.ascontiguousarray(values, dtype=np.int64)
        if values.ndim != 1 or len(values) == 0:
            raise OutOfRange("rmq needs a non-empty 1-d array")
        self.values = values
        n = len(values)
        nb = (n + _BLOCK - 1) // _BLOCK
        padded = np.full(nb * _BLOCK, np.iinfo(np.int64).max, np.int64)
        padded[:n] = values
        grid = padded.reshape(nb, _BLOCK)
        block_arg = (grid.argmin(axis=1) + np.arange(nb) * _BLOCK).astype(np.int32)
        levels = max(1, nb.bit_length())
        table = np.zeros((levels, nb), np.int32)
        table[0] = block_arg
        for lv in range(1, levels):
            half = 1 << (lv - 1)
            width = nb - (1 << lv) + 1
            if width <= 0:
                break
            a = table[lv - 1, :width]
            b = table[lv - 1, half : half + width]
            take_b = (values[b] < values[a]) | ((values[b] == values[a]) & (b < a))
            table[lv, :width] = np.where(take_b, b, a)
        self.block_arg = block_arg
        self.table = table

    def query(self, i: int, j: int) -> int:
        if not (0 <= i <= j < len(self.values)):
            raise OutOfRange(f"bad rmq range [{i}, {j}]")
        return int(rmq_query(self.values, self.block_arg, self.table, i, j))


def build_rmq(values) -> RmqIndex:
    return RmqIndex(values)
