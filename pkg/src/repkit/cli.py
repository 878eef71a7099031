"""Command-line front end.

Exit codes: 0 success, 2 invariant/validation violation, 1 I/O or usage
problem surfaced by the library.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import numpy as np

from .brute import min_ordered_parse, smallest_bidirectional, smallest_rotation
from .collage import (
    collage_to_scheme,
    expand_collage,
    lz_to_collage,
    read_collage,
    write_collage,
)
from .errors import InvariantViolation, RepkitError
from .grammars import build_rlslp, expand, read_rlslp, write_rlslp
from .parsers import greedy_ordered, lex_parse, lz_parse
from .report import measures, report
from .schemes import read_scheme, validate, write_scheme
from .suffix import build_context
from .text import FamilySpec, load_text, render

FAMILIES = ("fib", "fib-alt", "debruijn", "planted")


def _load(path: str):
    return load_text(Path(path).read_bytes())


def _fail(exc: BaseException, code: int):
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def _guarded(fn):
    try:
        fn()
    except InvariantViolation as exc:
        _fail(exc, 2)
    except RepkitError as exc:
        _fail(exc, 1)
    except OSError as exc:
        _fail(exc, 1)


@click.group()
@click.version_option(package_name="repkit")
def main():
    """Dictionary-compression measures, parses, and conversions."""


@main.command()
@click.option("--family", type=click.Choice(FAMILIES), required=True)
@click.option("--k", type=int, default=0, help="index for fib/fib-alt/debruijn")
@click.option("--sigma", type=int, default=0, help="alphabet size for debruijn/planted")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--ascii", "as_ascii", is_flag=True, help="write the a/b/int rendering instead of raw bytes")
def generate(family, k, sigma, out, as_ascii):
    """Write one family member as raw bytes (terminator not included)."""

    def run():
        t = FamilySpec(family, k=k, sigma=sigma).generate()
        if as_ascii:
            Path(out).write_text(render(t).rstrip("$"))
        else:
            Path(out).write_bytes(t.data[:-1])
        click.echo(f"{FamilySpec(family, k=k, sigma=sigma).name}: {t.n - 1} symbols")

    _guarded(run)


@main.command("dump-sa")
@click.option("--text", "text_path", type=click.Path(exists=True, dir_okay=False), required=True)
def dump_sa(text_path):
    """TSV of rank, suffix start, lcp, bwt byte."""

    def run():
        ctx = build_context(_load(text_path))
        click.echo("rank\tsa\tlcp\tbwt")
        for rank in range(ctx.n):
            click.echo(f"{rank}\t{ctx.sa[rank]}\t{ctx.lcp[rank]}\t{ctx.bwt[rank]}")

    _guarded(run)


@main.command("validate")
@click.option("--scheme", "scheme_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--text", "text_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--order", type=click.Choice(["none", "text", "lex"]), default="none",
              help="also check copies point backwards under this suffix order")
def validate_cmd(scheme_path, text_path, order):
    """Check a scheme file against a text; exit 2 unless it fully validates."""

    def run():
        t = _load(text_path)
        s = read_scheme(Path(scheme_path).read_text())
        io_order = None
        if order == "text":
            io_order = np.arange(t.n, dtype=np.int64)
        elif order == "lex":
            io_order = build_context(t).isa.astype(np.int64)
        rep = validate(s, t, io=io_order)
        click.echo(
            f"covers={rep.covers} contents_match={rep.contents_match} "
            f"acyclic={rep.acyclic} ordered={rep.ordered_under}"
        )
        if rep.first_violation is not None:
            click.echo(f"first violation: {rep.first_violation}")
        if not rep.ok:
            sys.exit(2)
        click.echo(f"OK: {s.size} phrases over n={s.n}")

    _guarded(run)


@main.command("parse")
@click.option("--text", "text_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--method", type=click.Choice(["lz", "lzno", "lex", "order"]), required=True)
@click.option("--order-file", type=click.Path(exists=True, dir_okay=False),
              help="whitespace-separated ranks, one per text position (method=order)")
@click.option("--out", type=click.Path(dir_okay=False))
def parse_cmd(text_path, method, order_file, out):
    """Parse a text and report phrase count (optionally writing the scheme)."""

    def run():
        t = _load(text_path)
        ctx = build_context(t)
        if method == "lz":
            result = lz_parse(ctx)
        elif method == "lzno":
            result = lz_parse(ctx, allow_overlap=False)
        elif method == "lex":
            result = lex_parse(ctx)
        else:
            if not order_file:
                raise click.UsageError("--method order needs --order-file")
            ranks = np.array(Path(order_file).read_text().split(), dtype=np.int64)
            result = greedy_ordered(ctx, ranks)
        if out:
            Path(out).write_text(write_scheme(result.scheme))
        click.echo(f"{result.method}: {result.phrase_count} phrases")

    _guarded(run)


@main.command("grammar")
@click.option("--build", "do_build", is_flag=True)
@click.option("--expand", "expand_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--text", "text_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False))
def grammar_cmd(do_build, expand_path, text_path, out):
    """Build an RLSLP from a text, or expand a grammar file back to bytes."""

    def run():
        if do_build == bool(expand_path):
            raise click.UsageError("pick exactly one of --build / --expand")
        if do_build:
            if not (text_path and out):
                raise click.UsageError("--build needs --text and --out")
            g = build_rlslp(_load(text_path))
            Path(out).write_text(write_rlslp(g))
            click.echo(f"{len(g)} rules over n={g.n}")
        else:
            g = read_rlslp(Path(expand_path).read_text())
            data = expand(g)
            data = data[:-1] if data.endswith(b"\x00") else data  # drop terminator
            if out:
                Path(out).write_bytes(data)
            else:
                sys.stdout.buffer.write(data)

    _guarded(run)


@main.command("collage")
@click.option("--from-lz", "from_lz", is_flag=True)
@click.option("--to-scheme", "to_scheme", is_flag=True)
@click.option("--expand", "do_expand", is_flag=True)
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--text", "text_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False))
def collage_cmd(from_lz, to_scheme, do_expand, in_path, text_path, out):
    """Convert LZ parse -> collage system -> bidirectional scheme."""

    def run():
        if sum([from_lz, to_scheme, do_expand]) != 1:
            raise click.UsageError("pick exactly one of --from-lz / --to-scheme / --expand")
        if from_lz:
            if not (text_path and out):
                raise click.UsageError("--from-lz needs --text and --out")
            t = _load(text_path)
            c = lz_to_collage(lz_parse(build_context(t)), t)
            Path(out).write_text(write_collage(c))
            click.echo(f"{len(c)} rules over n={c.n}")
        elif to_scheme:
            if not (in_path and text_path and out):
                raise click.UsageError("--to-scheme needs --in, --text and --out")
            t = _load(text_path)
            c = read_collage(Path(in_path).read_text())
            s = collage_to_scheme(c, t)
            rep = validate(s, t)
            if not rep.ok:
                raise InvariantViolation(f"derived scheme fails validation: {rep}")
            Path(out).write_text(write_scheme(s))
            click.echo(f"{s.size} phrases from {len(c)} rules")
        else:
            if not in_path:
                raise click.UsageError("--expand needs --in")
            c = read_collage(Path(in_path).read_text())
            data = expand_collage(c)
            data = data[:-1] if data.endswith(b"\x00") else data
            if out:
                Path(out).write_bytes(data)
            else:
                sys.stdout.buffer.write(data)

    _guarded(run)


@main.command("oracle")
@click.option("--op", type=click.Choice(["b", "minparse", "rotation"]), required=True)
@click.option("--text", "text_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--order", type=click.Choice(["text", "lex"]), default="lex",
              help="suffix order for minparse")
@click.option("--out", type=click.Path(dir_okay=False), help="witness scheme for --op b")
def oracle_cmd(op, text_path, order, out):
    """Exhaustive-search ground truth (tiny inputs only)."""

    def run():
        t = _load(text_path)
        if op == "b":
            size, witness = smallest_bidirectional(t)
            if out:
                Path(out).write_text(write_scheme(witness))
            click.echo(f"b = {size}")
        elif op == "minparse":
            if order == "text":
                precedes = lambda s, p: s < p
            else:
                isa = build_context(t).isa
                precedes = lambda s, p: isa[s] < isa[p]
            click.echo(f"min ordered parse = {min_ordered_parse(t, precedes)}")
        else:
            pos = smallest_rotation(t.data[:-1])
            click.echo(f"smallest rotation starts at {pos}")

    _guarded(run)


def _parse_krange(spec: str) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(spec)]


@main.command("measure")
@click.argument("paths", nargs=-1, type=click.Path(exists=True, dir_okay=False))
@click.option("--family", type=click.Choice(FAMILIES))
@click.option("--k", "krange", default=None, help="single index or lo..hi sweep")
@click.option("--step", type=int, default=1)
@click.option("--sigma", default=None, help="single size or lo..hi sweep")
@click.option("--deep", is_flag=True, help="also compute grammar/collage columns")
@click.option("--format", "fmt", type=click.Choice(["human", "json", "tsv"]), default="human")
@click.option("--paper-n", is_flag=True, help="report n without the appended terminator")
@click.option("--out", type=click.Path(dir_okay=False))
def measure_cmd(paths, family, krange, step, sigma, deep, fmt, paper_n, out):
    """Measure files and/or a generated family sweep."""

    def run():
        reports = []
        for p in paths:
            reports.append(measures(p, deep=deep))
        if family:
            ks = _parse_krange(krange)[::step] if krange else [0]
            sigmas = _parse_krange(sigma)[::step] if sigma else [0]
            for kk in ks:
                for ss in sigmas:
                    reports.append(measures(FamilySpec(family, k=kk, sigma=ss), deep=deep))
        if not reports and not family:
            raise click.UsageError("nothing to measure: give paths or --family")
        payload = report(fmt, reports, paper_n=paper_n)
        if out:
            Path(out).write_bytes(payload)
        else:
            sys.stdout.buffer.write(payload)

    _guarded(run)


if __name__ == "__main__":
    main()
