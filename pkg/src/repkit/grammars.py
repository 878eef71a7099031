"""Run-length straight-line programs (RLSLPs).

Construction repeats one locally consistent round until a single symbol
remains: collapse maximal runs into Power rules, then split the round's
alphabet into left/right sides and fuse every left-right boundary into a
Concat rule.  The side assignment is derandomized greedily (each symbol
takes the side with the larger conditionally expected number of fused
boundaries), which guarantees at least a quarter of the boundaries fuse,
so every round's output is <= ceil(3/4 * input length).

Identical blocks are hash-consed to one rule id across the whole build.
Reported size is the rule count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np
from numba import njit

from .errors import InvalidParameter, LengthMismatch, OrderViolation
from .parsers import METHOD_GRAMMAR, ParseResult
from .schemes import copy_phrase, explicit, make_scheme

T_KIND, C_KIND, P_KIND = 0, 1, 2


@dataclass(frozen=True)
class Rlslp:
    kinds: np.ndarray  # uint8: 0 terminal, 1 concat, 2 power
    arg1: np.ndarray  # byte | left id | base id
    arg2: np.ndarray  # 0    | right id | exponent
    lengths: np.ndarray  # expansion length per rule
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
        return ("P", int(self.arg1[i]), int(self.arg2[i]))

    def rules(self) -> Iterator[tuple]:
        return (self.rule(i) for i in range(len(self)))


@dataclass
class RlslpBuilder:
    kinds: list = field(default_factory=list)
    arg1: list = field(default_factory=list)
    arg2: list = field(default_factory=list)
    lengths: list = field(default_factory=list)
    _cons: dict = field(default_factory=dict)

    def _add(self, key, kind, a, b, ln) -> int:
        rid = self._cons.get(key)
        if rid is None:
            rid = len(self.kinds)
            self._cons[key] = rid
            self.kinds.append(kind)
            self.arg1.append(a)
            self.arg2.append(b)
            self.lengths.append(ln)
        return rid

    def terminal(self, byte: int) -> int:
        if not 0 <= byte <= 255:
            raise InvalidParameter(f"terminal byte {byte}")
        return self._add(("T", byte), T_KIND, byte, 0, 1)

    def concat(self, left: int, right: int) -> int:
        return self._add(
            ("C", left, right), C_KIND, left, right, self.lengths[left] + self.lengths[right]
        )

    def power(self, base: int, t: int) -> int:
        if t < 2:
            raise InvalidParameter(f"power exponent must be >= 2, got {t}")
        return self._add(("P", base, t), P_KIND, base, t, t * self.lengths[base])

    def freeze(self, start: int) -> Rlslp:
        return Rlslp(
            kinds=np.array(self.kinds, np.uint8),
            arg1=np.array(self.arg1, np.int64),
            arg2=np.array(self.arg2, np.int64),
            lengths=np.array(self.lengths, np.int64),
            start=start,
        )


@njit(cache=True)
def _derandomize(m, right_nb, right_cnt, right_indptr, left_nb, left_cnt, left_indptr):
    # status 0 = undecided, 1 = left side, 2 = right side
    status = np.zeros(m, np.uint8)
    for s in range(m):
        wl = 0.0  # expected boundaries fused if s goes left
        for i in range(right_indptr[s], right_indptr[s + 1]):
            b = right_nb[i]
            if status[b] == 2:
                wl += right_cnt[i]
            elif status[b] == 0:
                wl += 0.5 * right_cnt[i]
        wr = 0.0  # ... if s goes right
        for i in range(left_indptr[s], left_indptr[s + 1]):
            a = left_nb[i]
            if status[a] == 1:
                wr += left_cnt[i]
            elif status[a] == 0:
                wr += 0.5 * left_cnt[i]
        status[s] = 1 if wl >= wr else 2
    return status


def lcp_round(seq, rules: RlslpBuilder, left: Optional[set] = None) -> np.ndarray:
    """One locally consistent round over a sequence of rule ids.

    `left` forces the given ids onto the left side (everything else goes
    right); by default the derandomized assignment is used, which is what
    guarantees the 3/4 shrink.
    """
    seq = np.ascontiguousarray(seq, np.int64)
    if len(seq) < 2:
        raise InvalidParameter("round needs a sequence of length >= 2")

    # stage 1: maximal runs of one symbol become Power rules
    change = np.concatenate(([True], seq[1:] != seq[:-1]))
    starts = np.flatnonzero(change)
    runlen = np.diff(np.append(starts, len(seq)))
    vals = seq[starts]
    seq1 = vals.copy()
    long_runs = runlen >= 2
    if long_runs.any():
        keys = (vals[long_runs] << 32) | runlen[long_runs]
        ukeys, inv = np.unique(keys, return_inverse=True)
        ids = np.empty(len(ukeys), np.int64)
        for i, key in enumerate(ukeys):
            ids[i] = rules.power(int(key) >> 32, int(key) & 0xFFFFFFFF)
        seq1[long_runs] = ids[inv]
    if len(seq1) == 1:
        return seq1

    # stage 2: left/right split, fuse LR boundaries.  Adjacent ids are
    # distinct now, and the right half of a fused pair cannot itself open
    # a pair, so fused boundaries never overlap.
    uniq, inv = np.unique(seq1, return_inverse=True)
    m = len(uniq)
    if left is not None:
        forced = np.array(sorted(left), np.int64)
        status = np.where(np.isin(uniq, forced), 1, 2).astype(np.uint8)
    else:
        a = inv[:-1].astype(np.int64)
        b = inv[1:].astype(np.int64)
        pair_keys, counts = np.unique(a * m + b, return_counts=True)
        ua = pair_keys // m
        ub = pair_keys % m
        indptr_l = np.searchsorted(ua, np.arange(m + 1)).astype(np.int64)
        order_r = np.argsort(ub, kind="stable")
        indptr_r = np.searchsorted(ub[order_r], np.arange(m + 1)).astype(np.int64)
        status = _derandomize(m, ub, counts, indptr_l, ua[order_r], counts[order_r], indptr_r)
    sides = status[inv]
    pidx = np.flatnonzero((sides[:-1] == 1) & (sides[1:] == 2))
    if len(pidx) == 0:
        return seq1
    keys = (seq1[pidx] << 32) | seq1[pidx + 1]
    ukeys, inv2 = np.unique(keys, return_inverse=True)
    cids = np.empty(len(ukeys), np.int64)
    for i, key in enumerate(ukeys):
        cids[i] = rules.concat(int(key) >> 32, int(key) & 0xFFFFFFFF)
    merged = seq1.copy()
    merged[pidx] = cids[inv2]
    keep = np.ones(len(seq1), bool)
    keep[pidx + 1] = False
    return merged[keep]


def build_rlslp(t) -> Rlslp:
    """RLSLP generating exactly t.data, by repeated rounds."""
    data = np.frombuffer(t.data, np.uint8)
    rules = RlslpBuilder()
    _, first_idx = np.unique(data, return_index=True)
    tid = np.zeros(256, np.int64)
    for pos in sorted(int(i) for i in first_idx):
        byte = int(data[pos])
        tid[byte] = rules.terminal(byte)
    seq = tid[data]
    while len(seq) > 1:
        nxt = lcp_round(seq, rules)
        if len(nxt) >= len(seq):  # pragma: no cover - shrink bound forbids this
            acc = int(nxt[0])
            for rid in nxt[1:]:
                acc = rules.concat(acc, int(rid))
            seq = np.array([acc], np.int64)
            break
        seq = nxt
    return rules.freeze(int(seq[0]))


def _check_lengths(g: Rlslp):
    term = g.kinds == T_KIND
    conc = g.kinds == C_KIND
    powr = g.kinds == P_KIND
    ok = np.ones(len(g), bool)
    ok[term] = g.lengths[term] == 1
    ok[conc] = g.lengths[conc] == g.lengths[g.arg1[conc]] + g.lengths[g.arg2[conc]]
    ok[powr] = g.lengths[powr] == g.lengths[g.arg1[powr]] * g.arg2[powr]
    if not ok.all():
        bad = int(np.flatnonzero(~ok)[0])
        raise LengthMismatch(f"rule {bad} has an inconsistent cached length")


@njit(cache=True)
def _expand_kernel(kinds, arg1, arg2, lengths, start, out):
    nrules = kinds.shape[0]
    first = np.full(nrules, -1, np.int64)
    # Stack frames: tag >= 0 is "expand rule tag at offset"; tag == -1 is
    # "replicate out[off:off+width] until total bytes are filled" (emitted
    # under a Power's base so it pops after the base is written).
    cap = 2 * nrules + 8
    tag = np.empty(cap, np.int64)
    off_ = np.empty(cap, np.int64)
    wid = np.empty(cap, np.int64)
    tot = np.empty(cap, np.int64)
    tag[0] = start
    off_[0] = 0
    top = 1
    while top > 0:
        top -= 1
        rid = tag[top]
        off = off_[top]
        if rid == -1:
            width = wid[top]
            total = tot[top]
            filled = width
            while filled < total:
                chunk = filled
                if total - filled < chunk:
                    chunk = total - filled
                out[off + filled : off + filled + chunk] = out[off : off + chunk]
                filled += chunk
            continue
        if first[rid] >= 0:
            ln = lengths[rid]
            src = first[rid]
            out[off : off + ln] = out[src : src + ln]
            continue
        first[rid] = off
        k = kinds[rid]
        if k == 0:
            out[off] = arg1[rid]
        elif k == 1:
            left = arg1[rid]
            tag[top] = arg2[rid]
            off_[top] = off + lengths[left]
            top += 1
            tag[top] = left
            off_[top] = off
            top += 1
        else:
            base = arg1[rid]
            tag[top] = -1
            off_[top] = off
            wid[top] = lengths[base]
            tot[top] = lengths[rid]
            top += 1
            tag[top] = base
            off_[top] = off
            top += 1
    return first


def expand(g: Rlslp) -> bytes:
    """Expansion of the start rule, as raw bytes."""
    _check_lengths(g)
    out = np.zeros(g.n, np.uint8)
    _expand_kernel(g.kinds, g.arg1, g.arg2, g.lengths, g.start, out)
    return out.tobytes()


@dataclass(frozen=True)
class GrammarTree:
    """Derivation tree with shared subtrees cut off at non-kept occurrences.

    Every reachable rule keeps exactly one tree occurrence (the one whose
    start position comes first under the visiting order); every other
    occurrence is a leaf, as is the repeated tail of each Power node.
    """

    kept: np.ndarray  # rule id -> start of its internal occurrence, -1 if unreachable
    internal_count: int
    leaves: tuple  # Phrase precursors covering everything below cut-off


def _io_rank(io):
    if io is None:
        return lambda q: q
    return lambda q: int(io[q])


def grammar_tree(g: Rlslp, io=None) -> GrammarTree:
    """Cut the derivation tree of g so each rule stays internal only where
    its occurrence starts earliest under `io` (text order when io is None).

    Leaves become copy phrases onto the kept occurrence; Power tails become
    one long copy from the period.  With a general io the Power tail is
    checked slot-by-slot for order compatibility and OrderViolation is
    raised when the heads are not monotone.
    """
    _check_lengths(g)
    nrules = len(g)
    if io is not None:
        io = np.ascontiguousarray(io, np.int64)
        if len(io) != g.n:
            raise InvalidParameter("order permutation length != expansion length")
    rank = _io_rank(io)

    cand = np.full(nrules, -1, np.int64)
    cand[g.start] = 0
    contribs: list = []  # (rule id, slot position)
    phrases: list = []
    internal = 0

    def consider(x: int, q: int):
        contribs.append((x, q))
        if cand[x] < 0 or rank(q) < rank(cand[x]):
            cand[x] = q

    for rid in range(g.start, -1, -1):
        q = int(cand[rid])
        if q < 0:
            continue  # not reachable from start
        internal += 1
        k = g.kinds[rid]
        if k == T_KIND:
            phrases.append(explicit(q, int(g.arg1[rid])))
        elif k == C_KIND:
            consider(int(g.arg1[rid]), q)
            consider(int(g.arg2[rid]), q + int(g.lengths[g.arg1[rid]]))
        else:
            base = int(g.arg1[rid])
            t = int(g.arg2[rid])
            w = int(g.lengths[base])
            if io is None or rank(q) < rank(q + w):
                # keep the first period, copy the tail from it
                for j in range(1, t - 1):
                    if io is not None and not rank(q + j * w) < rank(q + (j + 1) * w):
                        raise OrderViolation(
                            f"power rule {rid}: period starts not increasing under io"
                        )
                phrases.append(copy_phrase(q + w, (t - 1) * w, q))
                consider(base, q)
            else:
                # keep the last period, copy the head from one period right
                for j in range(1, t - 1):
                    if not rank(q + j * w) > rank(q + (j + 1) * w):
                        raise OrderViolation(
                            f"power rule {rid}: period starts not decreasing under io"
                        )
                phrases.append(copy_phrase(q, (t - 1) * w, q + w))
                consider(base, q + (t - 1) * w)

    for x, q in contribs:
        if q != cand[x]:
            phrases.append(copy_phrase(q, int(g.lengths[x]), int(cand[x])))

    return GrammarTree(kept=cand, internal_count=internal, leaves=tuple(phrases))


def grammar_to_parse(g: Rlslp, io=None) -> ParseResult:
    """Left-to-right parse read off the cut derivation tree of g.

    The phrase count is at most (reachable rules) + 1; with io given, every
    copy's source starts strictly earlier under io, so the parse is a valid
    ordered bidirectional scheme whenever io is extensible.
    """
    tree = grammar_tree(g, io)
    scheme = make_scheme(g.n, tree.leaves)
    assert scheme.size <= tree.internal_count + 1
    return ParseResult(scheme, scheme.size, METHOD_GRAMMAR)


def write_rlslp(g: Rlslp) -> str:
    lines = [f"RLSLP n={g.n} start={g.start}"]
    for i in range(len(g)):
        k = g.kinds[i]
        if k == T_KIND:
            lines.append(f"T {i} {int(g.arg1[i])}")
        elif k == C_KIND:
            lines.append(f"C {i} {int(g.arg1[i])} {int(g.arg2[i])}")
        else:
            lines.append(f"P {i} {int(g.arg1[i])} {int(g.arg2[i])}")
    return "\n".join(lines) + "\n"


def _parse_header(line: str, magic: str):
    from .errors import InvalidParse

    parts = line.split()
    if len(parts) != 3 or parts[0] != magic:
        raise InvalidParse(f"bad header: {line!r}")
    try:
        n = int(parts[1].removeprefix("n="))
        start = int(parts[2].removeprefix("start="))
    except ValueError:
        raise InvalidParse(f"bad header: {line!r}") from None
    return n, start


def read_rlslp(text: str) -> Rlslp:
    from .errors import InvalidParse

    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidParse("empty grammar file")
    n, start = _parse_header(lines[0], "RLSLP")
    b = RlslpBuilder()
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
            b.lengths.append(1)
        elif kind in ("C", "P") and len(args) == 2:
            if kind == "C":
                if not (0 <= args[0] < rid and 0 <= args[1] < rid):
                    raise InvalidParse(f"rule {rid} references an undefined rule")
                b.kinds.append(C_KIND)
                b.arg1.append(args[0])
                b.arg2.append(args[1])
                b.lengths.append(b.lengths[args[0]] + b.lengths[args[1]])
            else:
                if not 0 <= args[0] < rid:
                    raise InvalidParse(f"rule {rid} references an undefined rule")
                if args[1] < 2:
                    raise InvalidParse(f"rule {rid} has exponent {args[1]} < 2")
                b.kinds.append(P_KIND)
                b.arg1.append(args[0])
                b.arg2.append(args[1])
                b.lengths.append(args[1] * b.lengths[args[0]])
        else:
            raise InvalidParse(f"bad rule line: {ln!r}")
    if not 0 <= start < len(b.kinds):
        raise InvalidParse(f"start rule {start} is not defined")
    g = b.freeze(start)
    if g.n != n:
        raise InvalidParse(f"header says n={n} but the start rule expands to {g.n}")
    return g
