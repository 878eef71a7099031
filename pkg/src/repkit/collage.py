"""Internal collage systems: RLSLP rules plus substring truncation.

A collage system adds Substring(base, lo, hi) to the grammar rule kinds:
its expansion is exp(base)[lo..hi] (0-based, inclusive).  A system is
internal when every rule's expansion occurs in the generated text; the
constructions here are internal by construction.

Two directions are implemented: Lempel-Ziv parse -> collage system with at
most 4z rules (the running-prefix induction), and collage system -> valid
bidirectional scheme with at most c+1 phrases (cut the derivation tree at
non-leftmost occurrences; truncation nodes are always leaves).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import (
    InvalidParameter,
    InvalidParse,
    LengthMismatch,
    NotInternal,
    TruncationOutOfRange,
)
from .parsers import METHOD_LZ, ParseResult
from .schemes import Scheme, copy_phrase, explicit, make_scheme

T_KIND, C_KIND, P_KIND, S_KIND = 0, 1, 2, 3


@dataclass(frozen=True)
class CollageSystem:
    kinds: np.ndarray  # uint8: 0 terminal, 1 concat, 2 power, 3 substring
    arg1: np.ndarray  # byte | left | base | base
    arg2: np.ndarray  # 0    | right | exponent | lo
    arg3: np.ndarray  # 0    | 0     | 0        | hi  (inclusive)
    lengths: np.ndarray
    start: int

    def __len__(self) -> int:
        return len(self.kinds)

    @property
    def n(self) -> int:
        return int(self.lengths[self.start])

    def rule(self, i: int) -> tuple:
        k = self.kinds[i]
        if k == T_KIND:
            return ("T", int(self.arg1[i]))
        if k == C_KIND:
            return ("C", int(self.arg1[i]), int(self.arg2[i]))
        if k == P_KIND:
            return ("P", int(self.arg1[i]), int(self.arg2[i]))
        return ("S", int(self.arg1[i]), int(self.arg2[i]), int(self.arg3[i]))

    def rules(self) -> Iterator[tuple]:
        return (self.rule(i) for i in range(len(self)))


@dataclass
class CollageBuilder:
    kinds: list = field(default_factory=list)
    arg1: list = field(default_factory=list)
    arg2: list = field(default_factory=list)
    arg3: list = field(default_factory=list)
    lengths: list = field(default_factory=list)
    _cons: dict = field(default_factory=dict)

    def _add(self, key, kind, a, b, c, ln) -> int:
        rid = self._cons.get(key)
        if rid is None:
            rid = len(self.kinds)
            self._cons[key] = rid
            self.kinds.append(kind)
            self.arg1.append(a)
            self.arg2.append(b)
            self.arg3.append(c)
            self.lengths.append(ln)
        return rid

    def terminal(self, byte: int) -> int:
        if not 0 <= byte <= 255:
            raise InvalidParameter(f"terminal byte {byte}")
        return self._add(("T", byte), T_KIND, byte, 0, 0, 1)

    def concat(self, left: int, right: int) -> int:
        ln = self.lengths[left] + self.lengths[right]
        return self._add(("C", left, right), C_KIND, left, right, 0, ln)

    def power(self, base: int, t: int) -> int:
        if t < 2:
            raise InvalidParameter(f"power exponent must be >= 2, got {t}")
        return self._add(("P", base, t), P_KIND, base, t, 0, t * self.lengths[base])

    def substring(self, base: int, lo: int, hi: int) -> int:
        if not 0 <= lo <= hi < self.lengths[base]:
            raise TruncationOutOfRange(
                f"slice [{lo}..{hi}] of a rule of length {self.lengths[base]}"
            )
        return self._add(("S", base, lo, hi), S_KIND, base, lo, hi, hi - lo + 1)

    def freeze(self, start: int) -> CollageSystem:
        return CollageSystem(
            kinds=np.array(self.kinds, np.uint8),
            arg1=np.array(self.arg1, np.int64),
            arg2=np.array(self.arg2, np.int64),
            arg3=np.array(self.arg3, np.int64),
            lengths=np.array(self.lengths, np.int64),
            start=start,
        )


def _check_collage_lengths(c: CollageSystem):
    ln = c.lengths
    for i in range(len(c)):
        k = c.kinds[i]
        if k == T_KIND:
            good = ln[i] == 1
        elif k == C_KIND:
            good = ln[i] == ln[c.arg1[i]] + ln[c.arg2[i]]
        elif k == P_KIND:
            good = ln[i] == ln[c.arg1[i]] * c.arg2[i]
        else:
            lo, hi = int(c.arg2[i]), int(c.arg3[i])
            if not 0 <= lo <= hi < ln[c.arg1[i]]:
                raise TruncationOutOfRange(
                    f"rule {i}: slice [{lo}..{hi}] of length-{int(ln[c.arg1[i]])} base"
                )
            good = ln[i] == hi - lo + 1
        if not good:
            raise LengthMismatch(f"rule {i} has an inconsistent cached length")


def expand_collage(c: CollageSystem) -> bytes:
    """Expansion of the start rule, honoring truncation semantics.

    Frames carry a visible window (lo, hi) of the rule being expanded so a
    truncation never materializes its whole base.  A rule fully expanded
    once is sliced straight out of the output buffer afterwards, which
    makes truncations over already-seen rules single copies.
    """
    _check_collage_lengths(c)
    n = c.n
    out = np.zeros(n, np.uint8)
    first = np.full(len(c), -1, np.int64)
    # (rule, lo, hi, off): write exp(rule)[lo:hi] at out[off:off+hi-lo]
    stack = [(c.start, 0, n, 0)]
    while stack:
        rid, lo, hi, off = stack.pop()
        if lo >= hi:
            continue
        full = lo == 0 and hi == c.lengths[rid]
        if first[rid] >= 0:
            src = first[rid] + lo
            out[off : off + hi - lo] = out[src : src + hi - lo]
            continue
        if full:
            first[rid] = off
        k = c.kinds[rid]
        if k == T_KIND:
            out[off] = int(c.arg1[rid])
        elif k == C_KIND:
            left, right = int(c.arg1[rid]), int(c.arg2[rid])
            wl = int(c.lengths[left])
            if hi > wl:  # pushed right-first so the left part is written first
                stack.append((right, max(lo - wl, 0), hi - wl, off + max(wl - lo, 0)))
            if lo < wl:
                stack.append((left, lo, min(hi, wl), off))
        elif k == P_KIND:
            base = int(c.arg1[rid])
            w = int(c.lengths[base])
            # period-by-period windows, pushed right-to-left
            j0, j1 = lo // w, (hi - 1) // w
            for j in range(j1, j0 - 1, -1):
                a = max(lo, j * w) - j * w
                b = min(hi, (j + 1) * w) - j * w
                stack.append((base, a, b, off + max(lo, j * w) - lo))
        else:
            base = int(c.arg1[rid])
            shift = int(c.arg2[rid])
            stack.append((base, shift + lo, shift + hi, off))
    return out.tobytes()


def check_internal(c: CollageSystem) -> bool:
    """Whether every rule's expansion occurs in exp(start).  Expensive."""
    whole = expand_collage(c)
    for rid in range(len(c)):
        piece = expand_collage(
            CollageSystem(c.kinds, c.arg1, c.arg2, c.arg3, c.lengths, rid)
        )
        if whole.find(piece) < 0:
            return False
    return True


def lz_to_collage(parse: ParseResult, t) -> CollageSystem:
    """Collage system with <= 4z rules generating t, grown phrase by phrase.

    S_i generates the prefix through phrase i.  An explicit phrase appends a
    Terminal; a phrase copying inside the prefix appends one truncation; a
    phrase overlapping its own target appends the available period O, its
    Power, and a truncated remainder.  Degenerate exponents drop the rules
    they would make redundant.
    """
    if parse.method != METHOD_LZ:
        raise InvalidParse(f"need an LzOverlap parse, got {parse.method}")
    scheme = parse.scheme
    if scheme.n != t.n:
        raise InvalidParse(f"parse covers {scheme.n} positions, text has {t.n}")
    data = t.data
    b = CollageBuilder()
    s_cur = -1
    for ph in scheme.phrases:
        pos = ph.target_start
        if ph.is_explicit:
            a = b.terminal(ph.symbol if ph.symbol >= 0 else data[pos])
            s_cur = a if s_cur < 0 else b.concat(s_cur, a)
            continue
        if s_cur < 0 or ph.source_start >= pos:
            raise InvalidParse(f"phrase at {pos} is not a left-pointing copy")
        x = ph.source_start
        y = x + ph.length - 1
        if y < pos:
            piece = b.substring(s_cur, x, y)
        else:
            per = pos - x
            q, rem = divmod(ph.length, per)
            if q == 0:  # pragma: no cover - an overlapping copy spans >= 1 period
                piece = b.substring(s_cur, x, x + rem - 1)
            else:
                o = b.substring(s_cur, x, pos - 1)
                rep = b.power(o, q) if q >= 2 else o
                if rem:
                    tail = b.substring(o, 0, rem - 1)
                    piece = b.concat(rep, tail)
                else:
                    piece = rep
        s_cur = b.concat(s_cur, piece)
    return b.freeze(s_cur)


def collage_to_scheme(c: CollageSystem, t) -> Scheme:
    """Bidirectional scheme with <= c+1 phrases from an internal system.

    The derivation tree is cut at every non-leftmost rule occurrence and at
    every truncation node.  A truncation leaf copies out of the leftmost
    occurrence of its base, shifted by the slice offset; every copy then
    points to a (rule id, position) pair that is strictly smaller in
    lexicographic order, so the scheme is acyclic.
    """
    _check_collage_lengths(c)
    if c.n != t.n:
        raise InvalidParameter(f"system expands to {c.n} symbols, text has {t.n}")
    nrules = len(c)
    kept = np.full(nrules, -1, np.int64)
    kept[c.start] = 0
    contribs: list = []
    trunc_leaves: list = []  # (base, lo, hi, target) resolved after the pass
    phrases: list = []

    def consider(x: int, q: int):
        contribs.append((x, q))
        if kept[x] < 0 or q < kept[x]:
            kept[x] = q

    for rid in range(c.start, -1, -1):
        q = int(kept[rid])
        if q < 0:
            continue
        k = c.kinds[rid]
        if k == T_KIND:
            phrases.append(explicit(q, int(c.arg1[rid])))
        elif k == C_KIND:
            consider(int(c.arg1[rid]), q)
            consider(int(c.arg2[rid]), q + int(c.lengths[c.arg1[rid]]))
        elif k == P_KIND:
            w = int(c.lengths[c.arg1[rid]])
            tt = int(c.arg2[rid])
            phrases.append(copy_phrase(q + w, (tt - 1) * w, q))
            consider(int(c.arg1[rid]), q)
        else:
            trunc_leaves.append((int(c.arg1[rid]), int(c.arg2[rid]), int(c.arg3[rid]), q))

    for base, lo, hi, q in trunc_leaves:
        if kept[base] < 0:
            raise NotInternal(
                f"truncation base rule {base} never occurs outside truncations"
            )
        phrases.append(copy_phrase(q, hi - lo + 1, int(kept[base]) + lo))
    for x, q in contribs:
        if q != kept[x]:
            phrases.append(copy_phrase(q, int(c.lengths[x]), int(kept[x])))

    scheme = make_scheme(c.n, phrases)
    assert scheme.size <= nrules + 1
    return scheme


def write_collage(c: CollageSystem) -> str:
    lines = [f"COLLAGE n={c.n} start={c.start}"]
    for i in range(len(c)):
        k = c.kinds[i]
        if k == T_KIND:
            lines.append(f"T {i} {int(c.arg1[i])}")
        elif k == C_KIND:
            lines.append(f"C {i} {int(c.arg1[i])} {int(c.arg2[i])}")
        elif k == P_KIND:
            lines.append(f"P {i} {int(c.arg1[i])} {int(c.arg2[i])}")
        else:
            lines.append(f"S {i} {int(c.arg1[i])} {int(c.arg2[i])} {int(c.arg3[i])}")
    return "\n".join(lines) + "\n"


def read_collage(text: str) -> CollageSystem:
    from .grammars import _parse_header

    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidParse("empty collage file")
    magic = lines[0].split(None, 1)[0] if lines[0].split() else ""
    if magic not in ("COLLAGE", "RLSLP"):
        raise InvalidParse(f"bad header: {lines[0]!r}")
    n, start = _parse_header(lines[0], magic)
    b = CollageBuilder()
    for ln in lines[1:]:
        parts = ln.split()
        try:
            kind = parts[0]
            rid = int(parts[1])
            args = [int(x) for x in parts[2:]]
        except (IndexError, ValueError):
            raise InvalidParse(f"bad rule line: {ln!r}") from None
        if rid != len(b.kinds):
            raise InvalidParse(f"rule ids must be consecutive from 0, got {ln!r}")
        if kind == "T" and len(args) == 1:
            b.kinds.append(T_KIND)
            b.arg1.append(args[0])
            b.arg2.append(0)
            b.arg3.append(0)
            b.lengths.append(1)
            continue
        if kind == "C" and len(args) == 2:
            ref1, ref2 = args
            if not (0 <= ref1 < rid and 0 <= ref2 < rid):
                raise InvalidParse(f"rule {rid} references an undefined rule")
            b.kinds.append(C_KIND)
            b.arg1.append(ref1)
            b.arg2.append(ref2)
            b.arg3.append(0)
            b.lengths.append(b.lengths[ref1] + b.lengths[ref2])
            continue
        if kind == "P" and len(args) == 2:
            ref, tt = args
            if not 0 <= ref < rid:
                raise InvalidParse(f"rule {rid} references an undefined rule")
            if tt < 2:
                raise InvalidParse(f"rule {rid} has exponent {tt} < 2")
            b.kinds.append(P_KIND)
            b.arg1.append(ref)
            b.arg2.append(tt)
            b.arg3.append(0)
            b.lengths.append(tt * b.lengths[ref])
            continue
        if kind == "S" and len(args) == 3:
            ref, lo, hi = args
            if not 0 <= ref < rid:
                raise InvalidParse(f"rule {rid} references an undefined rule")
            if not 0 <= lo <= hi < b.lengths[ref]:
                raise TruncationOutOfRange(
                    f"rule {rid}: slice [{lo}..{hi}] of length-{b.lengths[ref]} base"
                )
            b.kinds.append(S_KIND)
            b.arg1.append(ref)
            b.arg2.append(lo)
            b.arg3.append(hi)
            b.lengths.append(hi - lo + 1)
            continue
        raise InvalidParse(f"bad rule line: {ln!r}")
    if not 0 <= start < len(b.kinds):
        raise InvalidParse(f"start rule {start} is not defined")
    c = b.freeze(start)
    if c.n != n:
        raise InvalidParse(f"header says n={n} but the start rule expands to {c.n}")
    return c
