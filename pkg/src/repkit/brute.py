"""Small-scale exhaustive oracles.

Everything in this module is deliberately naive: suffix structures by
comparison sort, the smallest bidirectional scheme by exhaustive search
over phrase boundaries and sources, minimum ordered parses by shortest
path, rotation order by sorting rotations.  These are the ground truth
the fast implementations are tested against, so they share as little
code with them as possible.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import BudgetExceeded, EmptyInput
from .schemes import Scheme, copy_phrase, explicit, make_scheme
from .suffix import SuffixContext
from .text import Text


@dataclass(frozen=True)
class SearchBudget:
    max_n: int = 14
    timeout: Optional[float] = None  # seconds of wall clock

    def check_n(self, n: int, what: str):
        if n > self.max_n:
            raise BudgetExceeded(f"{what}: n={n} exceeds budget max_n={self.max_n}")

    def deadline(self) -> Optional[float]:
        return None if self.timeout is None else time.monotonic() + self.timeout


NAIVE_SA_BUDGET = SearchBudget(max_n=500)
SCHEME_BUDGET = SearchBudget(max_n=14)
PARSE_BUDGET = SearchBudget(max_n=200)


def naive_suffix_structures(t: Text, budget: SearchBudget = NAIVE_SA_BUDGET) -> SuffixContext:
    """SuffixContext assembled from definitions, no clever algorithms."""
    budget.check_n(t.n, "naive suffix structures")
    d = t.data
    n = t.n
    sa = sorted(range(n), key=lambda i: d[i:])
    isa = [0] * n
    for rank, p in enumerate(sa):
        isa[p] = rank
    lcp = [0] * n
    for rank in range(1, n):
        a, b = d[sa[rank - 1] :], d[sa[rank] :]
        h = 0
        while h < len(a) and h < len(b) and a[h] == b[h]:
            h += 1
        lcp[rank] = h
    bwt = bytes(d[p - 1] for p in sa)  # d[-1] is the sentinel, as required
    run_starts = [0] + [i for i in range(1, n) if bwt[i] != bwt[i - 1]]
    c_table = np.zeros(257, np.int64)
    for c in d:
        c_table[c + 1 :] += 1
    return SuffixContext(
        text=t,
        sa=np.array(sa, np.int32),
        isa=np.array(isa, np.int32),
        lcp=np.array(lcp, np.int32),
        bwt=bwt,
        run_starts=np.array(run_starts, np.int32),
        c_table=c_table,
    )


def _acyclic(f: list[int]) -> bool:
    n = len(f)
    state = [0] * n
    for start in range(n):
        p = start
        path = []
        while state[p] == 0:
            if f[p] < 0:
                break
            state[p] = 1
            path.append(p)
            p = f[p]
        if state[p] == 1 and f[p] >= 0:
            return False
        for q in path:
            state[q] = 2
    return True


def smallest_bidirectional(
    t: Text, budget: SearchBudget = SCHEME_BUDGET
) -> tuple[int, Scheme]:
    """Exhaustive minimum bidirectional scheme (the measure b).

    Enumerates phrase-boundary sets by increasing phrase count; for each
    tiling, backtracks over content-matching sources for the length>=2
    phrases and checks acyclicity.  Length-1 phrases are stored
    explicitly without loss of generality: replacing a length-1 copy by
    its symbol keeps the count and only removes f-edges.
    """
    budget.check_n(t.n, "smallest bidirectional scheme")
    d = t.data
    n = t.n
    deadline = budget.deadline()

    def sources_for(start: int, ln: int) -> list[int]:
        pat = d[start : start + ln]
        return [s for s in range(n - ln + 1) if s != start and d[s : s + ln] == pat]

    for phrase_count in range(1, n + 1):
        for cuts in itertools.combinations(range(1, n), phrase_count - 1):
            if deadline is not None and time.monotonic() > deadline:
                raise BudgetExceeded("smallest_bidirectional: timeout")
            bounds = [0, *cuts, n]
            segs = [(bounds[i], bounds[i + 1] - bounds[i]) for i in range(phrase_count)]
            long_segs = [seg for seg in segs if seg[1] >= 2]
            cand = [sources_for(st, ln) for st, ln in long_segs]
            if any(not c for c in cand):
                continue
            f = [-1] * n

            def assign(i: int) -> bool:
                if i == len(long_segs):
                    return _acyclic(f)
                st, ln = long_segs[i]
                for s in cand[i]:
                    for j in range(ln):
                        f[st + j] = s + j
                    if assign(i + 1):
                        return True
                for j in range(long_segs[i][1]):
                    f[long_segs[i][0] + j] = -1
                return False

            if assign(0):
                phrases = []
                for st, ln in segs:
                    if ln == 1:
                        phrases.append(explicit(st, d[st]))
                    else:
                        phrases.append(copy_phrase(st, ln, f[st]))
                return phrase_count, make_scheme(n, phrases)
    raise AssertionError("all-explicit tiling is always valid")  # pragma: no cover


def _max_extensions(d: bytes, precedes: Callable[[int, int], bool]) -> list[int]:
    """best[p] = longest copyable phrase starting at p, any source."""
    n = len(d)
    best = [0] * n
    for p in range(n):
        for s in range(n):
            if s == p:
                continue
            j = 0
            while (
                p + j < n
                and s + j < n
                and d[s + j] == d[p + j]
                and precedes(s + j, p + j)
            ):
                j += 1
            if j > best[p]:
                best[p] = j
    return best


def min_ordered_parse(
    t: Text,
    precedes: Callable[[int, int], bool],
    budget: SearchBudget = PARSE_BUDGET,
) -> int:
    """Exact minimum number of phrases over all parses ordered by `precedes`.

    precedes(s, p) must say whether the suffix at s is smaller than the
    suffix at p.  Shortest path over positions: from p one may jump to
    p+len for any len up to the longest valid copy (prefixes of a valid
    copy are valid), or to p+1 with an explicit symbol.
    """
    budget.check_n(t.n, "minimum ordered parse")
    n = t.n
    best = _max_extensions(t.data, precedes)
    INF = n + 1
    dist = [INF] * (n + 1)
    dist[0] = 0
    for p in range(n):  # DAG: edges only go forward
        if dist[p] == INF:
            continue
        reach = max(1, best[p])
        for q in range(p + 1, p + reach + 1):
            if dist[p] + 1 < dist[q]:
                dist[q] = dist[p] + 1
    return dist[n]


def smallest_rotation(word: bytes) -> int:
    """0-based start of the lexicographically smallest rotation (brute sort).

    Ties go to the smallest start index.
    """
    if len(word) == 0:
        raise EmptyInput("rotation of the empty word")
    doubled = bytes(word) + bytes(word)
    n = len(word)
    return min(range(n), key=lambda i: doubled[i : i + n])
