"""Bidirectional copy schemes: validation, decoding, induced orders.

A scheme partitions T[0..n) into phrases.  A Copy phrase copies
``length`` symbols from ``source_start`` (anywhere in the text, even
overlapping its own target); an Explicit phrase stores one symbol.  The
induced map f sends every copied position to its source position and
explicit positions to -1; a scheme is decodable exactly when f has no
cycles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from numba import njit

from .errors import CyclicScheme, InvalidParameter, NotATiling
from .suffix import SuffixContext, phi_array
from .text import SENTINEL, Text, fib_number, fibonacci_word


@dataclass(frozen=True)
class Phrase:
    target_start: int
    length: int
    source_start: int = -1  # -1 marks an explicit phrase
    symbol: int = -1  # the stored byte of an explicit phrase

    @property
    def is_explicit(self) -> bool:
        return self.source_start < 0

    def render(self) -> str:
        if self.is_explicit:
            return f"E@{self.target_start}={self.symbol}"
        return f"C@{self.target_start}<-{self.source_start}x{self.length}"


def copy_phrase(target_start: int, length: int, source_start: int) -> Phrase:
    return Phrase(target_start, length, source_start)


def explicit(target_start: int, symbol: int) -> Phrase:
    return Phrase(target_start, 1, -1, symbol)


@dataclass(frozen=True)
class Scheme:
    n: int
    phrases: tuple[Phrase, ...]

    @property
    def size(self) -> int:
        return len(self.phrases)


def make_scheme(n: int, phrases: Iterable[Phrase]) -> Scheme:
    return Scheme(n, tuple(sorted(phrases, key=lambda ph: ph.target_start)))


@dataclass
class ValidationReport:
    covers: bool
    contents_match: bool
    acyclic: bool
    ordered_under: Optional[bool] = None  # None when no order was supplied
    first_violation: Optional[str] = None

    @property
    def ok(self) -> bool:
        return (
            self.covers
            and self.contents_match
            and self.acyclic
            and self.ordered_under is not False
        )


def f_map(s: Scheme) -> np.ndarray:
    """Position map f: copied position -> its source, explicit -> -1.

    Raises NotATiling when the phrases do not partition 0..n-1 exactly.
    """
    f = np.full(s.n, -2, np.int64)
    for ph in s.phrases:
        t0, ln = ph.target_start, ph.length
        if ln < 1 or t0 < 0 or t0 + ln > s.n:
            raise NotATiling(f"phrase {ph.render()} outside the text")
        if np.any(f[t0 : t0 + ln] != -2):
            raise NotATiling(f"phrase {ph.render()} overlaps an earlier phrase")
        if ph.is_explicit:
            f[t0] = -1
        else:
            f[t0 : t0 + ln] = np.arange(ph.source_start, ph.source_start + ln)
    gap = np.flatnonzero(f == -2)
    if len(gap):
        raise NotATiling(f"position {gap[0]} not covered by any phrase")
    return f


@njit(cache=True)
def _chain_depths(f):
    """Length of each position's f-chain down to an explicit symbol.

    Returns (h, cycle) where cycle is a position on a cycle, or -1.
    """
    n = f.shape[0]
    h = np.full(n, -1, np.int64)
    state = np.zeros(n, np.uint8)  # 0 unseen, 1 on current path, 2 resolved
    stack = np.empty(n, np.int64)
    for start in range(n):
        if state[start] == 2:
            continue
        top = 0
        p = start
        while True:
            if state[p] == 2:
                break
            if state[p] == 1:
                return h, p
            if f[p] < 0:
                h[p] = 0
                state[p] = 2
                break
            state[p] = 1
            stack[top] = p
            top += 1
            p = f[p]
        base = h[p]
        while top > 0:
            top -= 1
            q = stack[top]
            base += 1
            h[q] = base
            state[q] = 2
    return h, -1


@njit(cache=True)
def _fill_by_depth(f, sym, order):
    n = f.shape[0]
    out = np.zeros(n, np.uint8)
    for idx in range(n):
        p = order[idx]
        if f[p] < 0:
            out[p] = sym[p]
        else:
            out[p] = out[f[p]]
    return out


def _explicit_symbols(s: Scheme) -> np.ndarray:
    sym = np.zeros(s.n, np.uint8)
    for ph in s.phrases:
        if ph.is_explicit:
            if not 0 <= ph.symbol <= 255:
                raise InvalidParameter(f"explicit phrase with byte {ph.symbol}")
            sym[ph.target_start] = ph.symbol
    return sym


def decode(s: Scheme) -> bytes:
    """Reconstruct the text from the scheme alone."""
    f = f_map(s)
    h, cycle = _chain_depths(f)
    if cycle >= 0:
        raise CyclicScheme(f"copy chain through position {cycle} never reaches a symbol")
    order = np.argsort(h, kind="stable")
    return _fill_by_depth(f, _explicit_symbols(s), order).tobytes()


def scheme_to_order(s: Scheme) -> np.ndarray:
    """A suffix order under which the scheme is ordered: rank array io.

    Positions are ranked by chain depth h (explicit symbols first), ties
    by ascending text position.  Any topological order of f works; this
    one is deterministic.
    """
    f = f_map(s)
    h, cycle = _chain_depths(f)
    if cycle >= 0:
        raise CyclicScheme(f"cycle through position {cycle}; no order exists")
    order = np.lexsort((np.arange(s.n), h))
    io = np.empty(s.n, np.int64)
    io[order] = np.arange(s.n)
    return io


def check_ordered(s: Scheme, io: np.ndarray) -> bool:
    """True when every copied position's source precedes it under io."""
    for ph in s.phrases:
        if ph.is_explicit:
            continue
        t0, ln, s0 = ph.target_start, ph.length, ph.source_start
        if not np.all(io[s0 : s0 + ln] < io[t0 : t0 + ln]):
            return False
    return True


def validate(s: Scheme, t: Text, io: Optional[np.ndarray] = None) -> ValidationReport:
    """Check tiling, copy contents against t, acyclicity, and (optionally)
    order compliance.  Never raises; failures land in the report."""
    rep = ValidationReport(covers=True, contents_match=True, acyclic=True)
    if s.n != t.n:
        return ValidationReport(False, False, False, first_violation="scheme/text length differ")
    try:
        f = f_map(s)
    except NotATiling as exc:
        return ValidationReport(False, False, False, first_violation=str(exc))

    data = np.frombuffer(t.data, np.uint8)
    for ph in s.phrases:
        if ph.is_explicit:
            if ph.symbol != data[ph.target_start]:
                rep.contents_match = False
                rep.first_violation = f"{ph.render()}: text holds {data[ph.target_start]}"
                break
        else:
            t0, ln, s0 = ph.target_start, ph.length, ph.source_start
            if s0 < 0 or s0 + ln > t.n or s0 == t0:
                rep.contents_match = False
                rep.first_violation = f"{ph.render()}: bad source interval"
                break
            if not np.array_equal(data[s0 : s0 + ln], data[t0 : t0 + ln]):
                rep.contents_match = False
                rep.first_violation = f"{ph.render()}: source content differs"
                break

    _, cycle = _chain_depths(f)
    if cycle >= 0:
        rep.acyclic = False
        if rep.first_violation is None:
            rep.first_violation = f"copy cycle through position {cycle}"

    if io is not None:
        rep.ordered_under = check_ordered(s, io)
        if rep.ordered_under is False and rep.first_violation is None:
            rep.first_violation = "a copy source does not precede its target under io"
    return rep


def bwt_scheme(ctx: SuffixContext) -> Scheme:
    """Bidirectional scheme induced by the BWT runs (at most 2r phrases).

    Sort the text positions SA[j] over run-start ranks j as t_1 < ... <
    t_r (t_1 is always 0: the text's own rank carries the unique sentinel
    in the BWT and so starts a run) and set t_{r+1} = n.  Chunk i copies
    T[t_i .. t_{i+1}-2] from phi(t_i) onward — omitted when empty — and
    stores T[t_{i+1}-1] explicitly.
    """
    n = ctx.n
    data = ctx.text.data
    tvals = np.sort(ctx.sa[ctx.run_starts])
    assert tvals[0] == 0
    pa = phi_array(ctx)
    phrases = []
    for i, ti in enumerate(tvals):
        ti = int(ti)
        nxt = int(tvals[i + 1]) if i + 1 < len(tvals) else n
        if nxt - 1 > ti:
            phrases.append(copy_phrase(ti, nxt - 1 - ti, int(pa[ti])))
        phrases.append(explicit(nxt - 1, data[nxt - 1]))
    return make_scheme(n, phrases)


def fibonacci_scheme(k: int) -> Scheme:
    """Constant-size scheme for the k-th Fibonacci word plus sentinel.

    Two long copies shifted by Fibonacci amounts around two explicit
    symbols in the middle, plus the explicit sentinel: 5 phrases for
    every k >= 6 (smaller words lack the room for the first copy).
    """
    if k < 6:
        raise InvalidParameter("the construction needs k >= 6")
    w = fibonacci_word(k)
    fk, fk1, fk2, fk3 = (fib_number(k - i) for i in range(4))
    phrases = [
        copy_phrase(0, fk1 - 2, fk2),
        explicit(fk1 - 2, w.data[fk1 - 2]),
        explicit(fk1 - 1, w.data[fk1 - 1]),
        copy_phrase(fk1, fk - fk1, fk1 - fk3),
        explicit(fk, SENTINEL),
    ]
    return make_scheme(w.n, phrases)


def write_scheme(s: Scheme) -> str:
    lines = [f"SCHEME n={s.n}"]
    for ph in s.phrases:
        if ph.is_explicit:
            lines.append(f"E {ph.target_start} {ph.symbol}")
        else:
            lines.append(f"C {ph.target_start} {ph.source_start} {ph.length}")
    return "\n".join(lines) + "\n"


def read_scheme(text: str) -> Scheme:
    from .errors import InvalidParse

    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split() if lines else []
    if len(header) != 2 or header[0] != "SCHEME" or not header[1].startswith("n="):
        raise InvalidParse(f"not a scheme file: {lines[0] if lines else ''!r}")
    try:
        n = int(header[1][2:])
    except ValueError:
        raise InvalidParse(f"bad scheme header: {lines[0]!r}") from None
    phrases = []
    try:
        for line in lines[1:]:
            parts = line.split()
            if parts[0] == "C":
                t0, s0, ln = map(int, parts[1:])
                phrases.append(copy_phrase(t0, ln, s0))
            elif parts[0] == "E":
                t0, byte = map(int, parts[1:])
                phrases.append(explicit(t0, byte))
            else:
                raise InvalidParse(f"bad scheme line: {line!r}")
    except ValueError:
        raise InvalidParse(f"bad scheme line: {line!r}") from None
    return make_scheme(n, phrases)
