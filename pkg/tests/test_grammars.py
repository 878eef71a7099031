import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import repkit as rk
from repkit.errors import (
    InvalidParameter,
    InvalidParse,
    LengthMismatch,
    OrderViolation,
)
from repkit.grammars import (
    C_KIND,
    P_KIND,
    T_KIND,
    Rlslp,
    RlslpBuilder,
    build_rlslp,
    expand,
    grammar_to_parse,
    lcp_round,
    read_rlslp,
    write_rlslp,
)
from repkit.schemes import validate


def spell(builder, rid):
    k = builder.kinds[rid]
    if k == T_KIND:
        return bytes([builder.arg1[rid]])
    if k == C_KIND:
        return spell(builder, builder.arg1[rid]) + spell(builder, builder.arg2[rid])
    return spell(builder, builder.arg1[rid]) * builder.arg2[rid]


def hand_built_16(worked):
    """Concat-only grammar for the worked example, 16 rules."""
    b = RlslpBuilder()
    A = b.terminal(ord("a"))
    B = b.terminal(ord("b"))
    D = b.terminal(ord("d"))
    L = b.terminal(ord("l"))
    R = b.terminal(ord("r"))
    Z = b.terminal(0)
    C = b.concat(A, L)
    E = b.concat(A, B)
    F = b.concat(A, R)
    G = b.concat(D, A)
    H = b.concat(C, E)
    I_ = b.concat(H, F)
    J = b.concat(I_, C)
    K = b.concat(I_, G)
    M = b.concat(J, K)
    return b.freeze(b.concat(M, Z))


def test_hand_built_grammar_expands(worked):
    g = hand_built_16(worked)
    assert len(g) == 16
    assert expand(g) == worked.data
    assert g.n == worked.n


def test_builder_hash_consing():
    b = RlslpBuilder()
    x = b.terminal(5)
    assert b.terminal(5) == x
    c1 = b.concat(x, x)
    assert b.concat(x, x) == c1
    p1 = b.power(x, 3)
    assert b.power(x, 3) == p1
    assert len(b.kinds) == 3


def test_power_exponent_validation():
    b = RlslpBuilder()
    x = b.terminal(1)
    with pytest.raises(InvalidParameter):
        b.power(x, 1)
    with pytest.raises(InvalidParameter):
        b.terminal(300)


def test_lcp_round_forced_partition(worked):
    # with 'a' forced left, pairing yields al|ab|ar|al|al|ab|ar|d|a$
    b = RlslpBuilder()
    ids = [b.terminal(x) for x in worked.data]
    out = lcp_round(np.asarray(ids, dtype=np.int64), b, left={b.terminal(ord("a"))})
    blocks = [spell(b, int(i)) for i in out]
    assert b"|".join(blocks) == b"al|ab|ar|al|al|ab|ar|d|a\x00"
    # equal blocks share a rule id
    assert out[0] == out[3] == out[4]
    assert out[1] == out[5]


def test_lcp_round_single_run():
    b = RlslpBuilder()
    a = b.terminal(ord("a"))
    out = lcp_round(np.asarray([a, a, a, a], dtype=np.int64), b)
    assert len(out) == 1
    assert b.kinds[int(out[0])] == P_KIND


def test_lcp_round_needs_two_symbols():
    b = RlslpBuilder()
    with pytest.raises(InvalidParameter):
        lcp_round(np.asarray([b.terminal(1)], dtype=np.int64), b)


@given(st.lists(st.integers(min_value=1, max_value=6), min_size=2, max_size=600))
@settings(max_examples=150, deadline=None)
def test_lcp_round_shrinkage(vals):
    b = RlslpBuilder()
    seq = np.asarray([b.terminal(v) for v in vals], dtype=np.int64)
    out = lcp_round(seq, b)
    assert len(out) <= math.ceil(0.75 * len(vals))
    assert b"".join(spell(b, int(i)) for i in out) == bytes(vals)


def test_lcp_round_deterministic():
    vals = [1, 2, 1, 2, 3, 3, 3, 1, 2, 1]
    runs = []
    for _ in range(2):
        b = RlslpBuilder()
        seq = np.asarray([b.terminal(v) for v in vals], dtype=np.int64)
        runs.append(list(lcp_round(seq, b)))
    assert runs[0] == runs[1]


def test_build_rlslp_roundtrips(worked):
    g = build_rlslp(worked)
    assert expand(g) == worked.data
    # round count and hence rule count stay logarithmic
    assert len(g) <= 60


def test_build_rlslp_run_text():
    t = rk.load_text("a" * 1024)
    g = build_rlslp(t)
    assert len(g) <= 25
    assert expand(g) == t.data


def test_build_rlslp_tiny_texts():
    for raw in ("", "a", "ab", "aaa"):
        t = rk.load_text(raw)
        g = build_rlslp(t)
        assert expand(g) == t.data


@pytest.mark.parametrize("seed", range(5))
def test_build_rlslp_random_roundtrip(seed):
    rng = np.random.default_rng(seed + 42)
    raw = bytes(rng.integers(1, 5, size=int(rng.integers(2, 3000))).astype(np.uint8))
    t = rk.load_text(raw)
    assert expand(build_rlslp(t)) == t.data


def test_grammar_to_parse_text_order(worked):
    g = build_rlslp(worked)
    p = grammar_to_parse(g)
    assert p.phrase_count <= len(g) + 1
    io = np.arange(worked.n, dtype=np.int64)
    rep = validate(p.scheme, worked, io=io)
    assert rep.ok and rep.ordered_under


def test_grammar_to_parse_isa_order(worked, worked_ctx):
    g = build_rlslp(worked)
    p = grammar_to_parse(g, io=worked_ctx.isa)
    assert p.phrase_count <= len(g) + 1
    rep = validate(p.scheme, worked, io=worked_ctx.isa)
    assert rep.ok and rep.ordered_under


def test_grammar_to_parse_terminal_start():
    b = RlslpBuilder()
    g = b.freeze(b.terminal(0))
    p = grammar_to_parse(g)
    assert p.phrase_count == 1
    assert p.scheme.phrases[0].is_explicit


def test_grammar_to_parse_power_order_violation():
    # io that is neither ascending nor descending across the run heads:
    # both ways of unrolling the Power break the order
    b = RlslpBuilder()
    a = b.terminal(ord("a"))
    p4 = b.power(a, 4)
    g = b.freeze(b.concat(p4, b.terminal(0)))
    assert expand(g) == b"aaaa\x00"
    bad_io = np.array([0, 2, 1, 3, 4], dtype=np.int64)
    with pytest.raises(OrderViolation):
        grammar_to_parse(g, io=bad_io)


def test_grammar_bounds_against_parsers(random_corpus):
    for name, t in random_corpus[:25]:
        ctx = rk.build_context(t)
        g = build_rlslp(t)
        assert rk.lz_parse(ctx).phrase_count <= len(g) + 1, name
        assert rk.lex_parse(ctx).phrase_count <= len(g) + 1, name


def test_grammar_text_roundtrip(worked):
    g = build_rlslp(worked)
    back = read_rlslp(write_rlslp(g))
    assert expand(back) == worked.data
    assert list(back.kinds) == list(g.kinds)
    assert back.start == g.start


def test_read_rlslp_rejects_corruption():
    with pytest.raises(InvalidParse):  # forward ref
        read_rlslp("RLSLP n=3 start=1\nT 0 97\nC 1 0 2\n")
    with pytest.raises(InvalidParse):  # exponent < 2
        read_rlslp("RLSLP n=3 start=1\nT 0 97\nP 1 0 1\n")
    with pytest.raises(InvalidParse):  # header length disagrees
        read_rlslp("RLSLP n=99 start=1\nT 0 97\nC 1 0 0\n")
    with pytest.raises(InvalidParse):
        read_rlslp("SCHEME n=1\n")


def test_expand_detects_length_corruption():
    g = Rlslp(
        kinds=np.array([T_KIND, T_KIND, C_KIND], np.uint8),
        arg1=np.array([97, 0, 0], np.int64),
        arg2=np.array([0, 0, 1], np.int64),
        lengths=np.array([1, 1, 3], np.int64),  # concat says 3, children sum to 2
        start=2,
    )
    with pytest.raises(LengthMismatch):
        expand(g)
