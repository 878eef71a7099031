"""Greedy left-to-right parses: Lempel-Ziv, lex-parse, generic ordered.

Three independent routes on purpose, so they can cross-check each other:

* lz_parse walks phrase starts extending matches against the previous/
  next smaller suffix-array values (classic factorization; extension
  work telescopes over the tiling, so it is linear).
* lex_parse reads phrase lengths straight off the LCP array: the longest
  match against any lexicographically smaller suffix is the match with
  the adjacent rank.
* greedy_ordered handles any extension-closed rank order io: per phrase
  it binary-searches the longest prefix whose suffix-array interval
  still contains a rank with io below the target's, using range-minimum
  queries over the LCP array and over K[k] = io[SA[k]].

greedy_naive is the slow reference for arbitrary (even non-extensible)
orders given as a callable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

from .errors import InvalidParameter, NonExtensibleOrder
from .schemes import Scheme, check_ordered, copy_phrase, explicit, make_scheme
from .suffix import RmqIndex, SuffixContext, rmq_query
from .text import Text

METHOD_LZ = "LzOverlap"
METHOD_LZ_NO = "LzNoOverlap"
METHOD_LEX = "LexParse"
METHOD_ORDERED = "GreedyOrdered"
METHOD_NAIVE = "GreedyNaive"
METHOD_GRAMMAR = "GrammarLeaves"


@dataclass(frozen=True)
class ParseResult:
    scheme: Scheme
    phrase_count: int
    method: str


def _assemble(n: int, data: bytes, targets, lens, srcs, method: str) -> ParseResult:
    phrases = []
    for t0, ln, s0 in zip(targets, lens, srcs):
        if ln == 0:
            phrases.append(explicit(int(t0), data[int(t0)]))
        else:
            phrases.append(copy_phrase(int(t0), int(ln), int(s0)))
    scheme = make_scheme(n, phrases)
    # the sentinel is unique, so no copy can cover the last position
    assert scheme.phrases[-1].is_explicit
    return ParseResult(scheme, scheme.size, method)


@njit(cache=True)
def _rank_psv_nsv(sa):
    """Per rank: nearest smaller suffix-array value above/below, as text
    positions (-1 when none)."""
    n = sa.shape[0]
    psv = np.full(n, -1, np.int64)
    nsv = np.full(n, -1, np.int64)
    stack = np.empty(n, np.int64)
    top = -1
    for k in range(n):
        v = sa[k]
        while top >= 0 and sa[stack[top]] > v:
            nsv[stack[top]] = v
            top -= 1
        if top >= 0:
            psv[k] = sa[stack[top]]
        top += 1
        stack[top] = k
    return psv, nsv


@njit(cache=True)
def _lz_overlap_kernel(data, sa, isa, psv, nsv):
    n = sa.shape[0]
    targets = np.empty(n, np.int64)
    lens = np.empty(n, np.int64)
    srcs = np.empty(n, np.int64)
    cnt = 0
    p = 0
    while p < n:
        k = isa[p]
        s1 = psv[k]
        s2 = nsv[k]
        l1 = 0
        l2 = 0
        if s1 >= 0:
            while p + l1 < n and data[s1 + l1] == data[p + l1]:
                l1 += 1
        if s2 >= 0:
            while p + l2 < n and data[s2 + l2] == data[p + l2]:
                l2 += 1
        if l1 > l2 or (l1 == l2 and 0 <= s1 < s2):
            ln, src = l1, s1
        else:
            ln, src = l2, s2
        targets[cnt] = p
        if ln == 0:
            lens[cnt] = 0
            srcs[cnt] = -1
            p += 1
        else:
            lens[cnt] = ln
            srcs[cnt] = src
            p += ln
        cnt += 1
    return targets[:cnt], lens[:cnt], srcs[:cnt]


@njit(cache=True)
def _interval_bounds(lcp, lblk, ltab, k, ell, n):
    """Maximal rank interval around k whose suffixes share >= ell symbols."""
    lo = k
    if k > 0:
        loa = 0
        hia = k
        while loa < hia:
            mid = (loa + hia) >> 1
            m = rmq_query(lcp, lblk, ltab, mid + 1, k)
            if lcp[m] >= ell:
                hia = mid
            else:
                loa = mid + 1
        lo = loa
    hi = k
    if k < n - 1:
        lob = k
        hib = n - 1
        while lob < hib:
            mid = (lob + hib + 1) >> 1
            m = rmq_query(lcp, lblk, ltab, k + 1, mid)
            if lcp[m] >= ell:
                lob = mid
            else:
                hib = mid - 1
        hi = lob
    return lo, hi


@njit(cache=True)
def _lz_no_overlap_kernel(data, sa, isa, lcp, lblk, ltab, sa64, kblk, ktab):
    n = sa.shape[0]
    targets = np.empty(n, np.int64)
    lens = np.empty(n, np.int64)
    srcs = np.empty(n, np.int64)
    cnt = 0
    p = 0
    while p < n:
        k = isa[p]
        cap = n - 1 - p
        if p < cap:
            cap = p
        best = 0
        if cap >= 1:
            lo, hi = _interval_bounds(lcp, lblk, ltab, k, 1, n)
            m = rmq_query(sa64, kblk, ktab, lo, hi)
            if sa64[m] <= p - 1:
                lol = 1
                hil = cap
                while lol < hil:
                    mid = (lol + hil + 1) >> 1
                    lo2, hi2 = _interval_bounds(lcp, lblk, ltab, k, mid, n)
                    m2 = rmq_query(sa64, kblk, ktab, lo2, hi2)
                    if sa64[m2] <= p - mid:
                        lol = mid
                    else:
                        hil = mid - 1
                best = lol
                lo3, hi3 = _interval_bounds(lcp, lblk, ltab, k, best, n)
                srcs[cnt] = sa64[rmq_query(sa64, kblk, ktab, lo3, hi3)]
        targets[cnt] = p
        if best == 0:
            lens[cnt] = 0
            srcs[cnt] = -1
            p += 1
        else:
            lens[cnt] = best
            p += best
        cnt += 1
    return targets[:cnt], lens[:cnt], srcs[:cnt]


@njit(cache=True)
def _greedy_ordered_kernel(sa, isa, lcp, lblk, ltab, K, kblk, ktab, io):
    n = sa.shape[0]
    targets = np.empty(n, np.int64)
    lens = np.empty(n, np.int64)
    srcs = np.empty(n, np.int64)
    cnt = 0
    p = 0
    while p < n:
        k = isa[p]
        cap = n - 1 - p
        best = 0
        if cap >= 1:
            lo, hi = _interval_bounds(lcp, lblk, ltab, k, 1, n)
            m = rmq_query(K, kblk, ktab, lo, hi)
            if K[m] < io[p]:
                lol = 1
                hil = cap
                while lol < hil:
                    mid = (lol + hil + 1) >> 1
                    lo2, hi2 = _interval_bounds(lcp, lblk, ltab, k, mid, n)
                    m2 = rmq_query(K, kblk, ktab, lo2, hi2)
                    if K[m2] < io[p]:
                        lol = mid
                    else:
                        hil = mid - 1
                best = lol
                lo3, hi3 = _interval_bounds(lcp, lblk, ltab, k, best, n)
                srcs[cnt] = sa[rmq_query(K, kblk, ktab, lo3, hi3)]
        targets[cnt] = p
        if best == 0:
            lens[cnt] = 0
            srcs[cnt] = -1
            p += 1
        else:
            lens[cnt] = best
            p += best
        cnt += 1
    return targets[:cnt], lens[:cnt], srcs[:cnt]


def lz_parse(ctx: SuffixContext, allow_overlap: bool = True) -> ParseResult:
    """Greedy Lempel-Ziv factorization (measures z and z_no)."""
    data = np.frombuffer(ctx.text.data, np.uint8)
    if allow_overlap:
        psv, nsv = _rank_psv_nsv(ctx.sa)
        t, l, s = _lz_overlap_kernel(data, ctx.sa, ctx.isa, psv, nsv)
        return _assemble(ctx.n, ctx.text.data, t, l, s, METHOD_LZ)
    lcp_rmq = RmqIndex(ctx.lcp)
    sa_rmq = RmqIndex(ctx.sa)
    t, l, s = _lz_no_overlap_kernel(
        data,
        ctx.sa,
        ctx.isa,
        lcp_rmq.values,
        lcp_rmq.block_arg,
        lcp_rmq.table,
        sa_rmq.values,
        sa_rmq.block_arg,
        sa_rmq.table,
    )
    return _assemble(ctx.n, ctx.text.data, t, l, s, METHOD_LZ_NO)


def lex_parse(ctx: SuffixContext) -> ParseResult:
    """Greedy parse against lexicographically smaller suffixes (measure v).

    Phrase length at p is LCP[ISA[p]] — the longest common prefix with
    the rank just below — and the source is that adjacent suffix.
    """
    n = ctx.n
    data = ctx.text.data
    sa, isa, lcp = ctx.sa, ctx.isa, ctx.lcp
    phrases = []
    p = 0
    while p < n:
        k = int(isa[p])
        ln = int(lcp[k]) if k > 0 else 0
        if ln == 0:
            phrases.append(explicit(p, data[p]))
            p += 1
        else:
            phrases.append(copy_phrase(p, ln, int(sa[k - 1])))
            p += ln
    scheme = make_scheme(n, phrases)
    return ParseResult(scheme, scheme.size, METHOD_LEX)


def greedy_ordered(ctx: SuffixContext, io: np.ndarray) -> ParseResult:
    """Greedy minimal parse under an extension-closed rank order io.

    io[p] is the rank of the suffix at p; io must be a permutation of
    0..n-1.  The result is checked to be ordered under io; when the
    check fails the order was not extension-closed.
    """
    io = np.ascontiguousarray(io, dtype=np.int64)
    if io.shape != (ctx.n,) or not np.array_equal(np.sort(io), np.arange(ctx.n)):
        raise InvalidParameter("io must be a permutation of 0..n-1")
    K = io[ctx.sa]
    lcp_rmq = RmqIndex(ctx.lcp)
    k_rmq = RmqIndex(K)
    t, l, s = _greedy_ordered_kernel(
        ctx.sa,
        ctx.isa,
        lcp_rmq.values,
        lcp_rmq.block_arg,
        lcp_rmq.table,
        k_rmq.values,
        k_rmq.block_arg,
        k_rmq.table,
        io,
    )
    res = _assemble(ctx.n, ctx.text.data, t, l, s, METHOD_ORDERED)
    if not check_ordered(res.scheme, io):
        raise NonExtensibleOrder(
            "greedy result is not ordered under io; the order does not extend"
        )
    return res


def greedy_naive(t: Text, precedes: Callable[[int, int], bool]) -> ParseResult:
    """Reference greedy for arbitrary order oracles, O(n^2) per phrase.

    At each phrase start the longest valid copy is found by extending
    every candidate source position until content or order breaks.
    """
    d = t.data
    n = t.n
    phrases = []
    p = 0
    while p < n:
        best_l = 0
        best_s = -1
        for s in range(n):
            if s == p:
                continue
            j = 0
            while p + j < n and s + j < n and d[s + j] == d[p + j] and precedes(s + j, p + j):
                j += 1
            if j > best_l:
                best_l, best_s = j, s
        if best_l == 0:
            phrases.append(explicit(p, d[p]))
            p += 1
        else:
            phrases.append(copy_phrase(p, best_l, best_s))
            p += best_l
    scheme = make_scheme(n, phrases)
    return ParseResult(scheme, scheme.size, METHOD_NAIVE)
