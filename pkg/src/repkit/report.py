"""Measure reports: run the whole pipeline on a text and tabulate.

The fast columns (r, z, z_no, v, BWT-scheme size) are always computed;
the grammar and collage columns cost real time and are opt-in via deep=True.
Every theorem-mandated inequality between columns is enforced at assembly
time: a violation raises instead of producing a quietly wrong table.

Note on n: reported n counts the appended terminator.  Published tables
for the same strings usually count raw symbols only; pass paper_n=True to
report() to subtract one for side-by-side comparison.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from .collage import collage_to_scheme, expand_collage, lz_to_collage
from .errors import InvalidParameter, InvariantViolation
from .grammars import build_rlslp
from .parsers import lex_parse, lz_parse
from .schemes import bwt_scheme
from .suffix import build_context
from .text import FamilySpec, Text, load_text


@dataclass(frozen=True)
class MeasureReport:
    name: str
    n: int
    sigma: int
    r: int
    z: int
    z_no: int
    v: int
    bwt_scheme_size: int
    rlslp_rules: Optional[int] = None
    collage_rules: Optional[int] = None
    scheme_from_collage_size: Optional[int] = None

    @property
    def ratios(self) -> dict:
        return {"z_over_v": self.z / self.v, "r_over_v": self.r / self.v}


def _require(cond: bool, what: str, name: str):
    if not cond:
        raise InvariantViolation(f"{name}: {what}")


def measures(source: Union[str, Path, FamilySpec, Text], deep: bool = False,
             name: Optional[str] = None) -> MeasureReport:
    """Compute all measures for a file path, a family spec, or a text."""
    if isinstance(source, Text):
        t = source
        name = name or f"text-{t.n}"
    elif isinstance(source, FamilySpec):
        t = source.generate()
        name = name or source.name
    else:
        path = Path(source)
        t = load_text(path.read_bytes())
        name = name or path.name

    ctx = build_context(t)
    r = ctx.r
    z = lz_parse(ctx).phrase_count
    z_no = lz_parse(ctx, allow_overlap=False).phrase_count
    v = lex_parse(ctx).phrase_count
    bsch = bwt_scheme(ctx)

    _require(v <= 2 * r, f"v={v} > 2r={2 * r}", name)
    _require(z <= z_no, f"z={z} > z_no={z_no}", name)
    _require(bsch.size <= 2 * r, f"BWT scheme size={bsch.size} > 2r={2 * r}", name)

    rlslp_rules = collage_rules = sfc = None
    if deep:
        g = build_rlslp(t)
        rlslp_rules = len(g)
        _require(z <= rlslp_rules + 1, f"z={z} > rlslp+1={rlslp_rules + 1}", name)
        _require(v <= rlslp_rules + 1, f"v={v} > rlslp+1={rlslp_rules + 1}", name)
        col = lz_to_collage(lz_parse(ctx), t)
        collage_rules = len(col)
        _require(collage_rules <= 4 * z, f"collage={collage_rules} > 4z={4 * z}", name)
        _require(expand_collage(col) == t.data, "collage does not round-trip", name)
        sfc = collage_to_scheme(col, t).size
        _require(sfc <= collage_rules + 1,
                 f"scheme-from-collage={sfc} > c+1={collage_rules + 1}", name)

    return MeasureReport(
        name=name, n=t.n, sigma=t.distinct_symbols, r=r, z=z, z_no=z_no, v=v,
        bwt_scheme_size=bsch.size, rlslp_rules=rlslp_rules,
        collage_rules=collage_rules, scheme_from_collage_size=sfc,
    )


_COLUMNS = [
    "name", "n", "sigma", "r", "z", "z_no", "v", "bwt_scheme",
    "rlslp", "collage", "scheme_from_collage", "z/v", "r/v",
]


def _row(rep: MeasureReport, paper_n: bool) -> list:
    opt = lambda x: "-" if x is None else str(x)
    return [
        rep.name,
        str(rep.n - 1 if paper_n else rep.n),
        str(rep.sigma),
        str(rep.r),
        str(rep.z),
        str(rep.z_no),
        str(rep.v),
        str(rep.bwt_scheme_size),
        opt(rep.rlslp_rules),
        opt(rep.collage_rules),
        opt(rep.scheme_from_collage_size),
        f"{rep.ratios['z_over_v']:.3f}",
        f"{rep.ratios['r_over_v']:.3f}",
    ]


def report(format: str, reports: Sequence[MeasureReport], paper_n: bool = False) -> bytes:
    """Render reports as human text, JSON, or TSV.  Deterministic bytes."""
    if format == "json":
        payload = {
            "version": 1,
            "reports": [
                {
                    "name": rep.name,
                    "n": rep.n - 1 if paper_n else rep.n,
                    "sigma": rep.sigma,
                    "r": rep.r,
                    "z": rep.z,
                    "z_no": rep.z_no,
                    "v": rep.v,
                    "bwt_scheme_size": rep.bwt_scheme_size,
                    "rlslp_rules": rep.rlslp_rules,
                    "collage_rules": rep.collage_rules,
                    "scheme_from_collage_size": rep.scheme_from_collage_size,
                    "ratios": rep.ratios,
                }
                for rep in reports
            ],
        }
        return (json.dumps(payload, indent=2) + "\n").encode()

    rows = [_row(rep, paper_n) for rep in reports]
    if format == "tsv":
        buf = io.StringIO()
        buf.write("\t".join(_COLUMNS) + "\n")
        for row in rows:
            buf.write("\t".join(row) + "\n")
        return buf.getvalue().encode()

    if format == "human":
        widths = [len(c) for c in _COLUMNS]
        for row in rows:
            widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
        buf = io.StringIO()
        head = "  ".join(c.ljust(w) for c, w in zip(_COLUMNS, widths))
        buf.write(head.rstrip() + "\n")
        buf.write("-" * len(head.rstrip()) + "\n")
        for row in rows:
            line = "  ".join(cell.ljust(w) for cell, w in zip(row, widths))
            buf.write(line.rstrip() + "\n")
        return buf.getvalue().encode()

    raise InvalidParameter(f"unknown report format {format!r}")