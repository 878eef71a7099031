import json

import pytest
from click.testing import CliRunner

import repkit as rk
from repkit.cli import main
from repkit.report import MeasureReport, measures, report


@pytest.fixture
def runner():
    return CliRunner()


def test_measures_worked(worked):
    rep = measures(worked, name="worked")
    assert (rep.n, rep.sigma) == (17, 5)
    assert (rep.r, rep.z, rep.z_no, rep.v) == (10, 11, 11, 11)
    assert rep.bwt_scheme_size == 13
    assert rep.rlslp_rules is None and rep.collage_rules is None
    assert rep.ratios["z_over_v"] == 1.0


def test_measures_deep_fields():
    rep = measures(rk.FamilySpec("fib", k=12), deep=True)
    assert rep.name == "fib-k12"
    assert rep.rlslp_rules is not None
    assert rep.collage_rules <= 4 * rep.z
    assert rep.scheme_from_collage_size <= rep.collage_rules + 1


def test_measures_from_path(tmp_path):
    p = tmp_path / "t.bin"
    p.write_bytes(b"banana")
    rep = measures(p)
    assert rep.name == "t.bin" and rep.n == 7


def test_report_json_roundtrip(worked):
    rep = measures(worked, name="worked")
    payload = json.loads(report("json", [rep]))
    assert payload["version"] == 1
    (row,) = payload["reports"]
    assert row["name"] == "worked" and row["n"] == 17 and row["v"] == 11
    # paper-style n leaves out the appended terminator
    paper = json.loads(report("json", [rep], paper_n=True))
    assert paper["reports"][0]["n"] == 16


def test_report_tsv_and_human(worked):
    rep = measures(worked, name="worked")
    tsv = report("tsv", [rep]).decode().splitlines()
    assert tsv[0].split("\t")[:4] == ["name", "n", "sigma", "r"]
    assert tsv[1].split("\t")[:2] == ["worked", "17"]
    human = report("human", [rep]).decode()
    assert "worked" in human and " 13" in human
    # deterministic bytes
    assert report("tsv", [rep]) == report("tsv", [rep])


def test_generate_and_measure_cli(runner, tmp_path):
    out = tmp_path / "fib6.bin"
    res = runner.invoke(main, ["generate", "--family", "fib", "--k", "6", "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert out.read_bytes() == bytes([1, 2, 1, 1, 2, 1, 2, 1])
    res = runner.invoke(main, ["measure", str(out), "--format", "json"])
    assert res.exit_code == 0, res.output
    row = json.loads(res.output)["reports"][0]
    assert row["n"] == 9 and row["r"] == 4


def test_generate_ascii(runner, tmp_path):
    out = tmp_path / "fib6.txt"
    res = runner.invoke(main, ["generate", "--family", "fib", "--k", "6", "--ascii", "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert out.read_text() == "abaababa"


def test_generate_bad_parameters(runner, tmp_path):
    res = runner.invoke(
        main, ["generate", "--family", "planted", "--sigma", "6", "--out", str(tmp_path / "x")]
    )
    assert res.exit_code == 1
    assert "error:" in res.output


def test_dump_sa_cli(runner, tmp_path, worked, worked_ctx):
    p = tmp_path / "t.bin"
    p.write_bytes(worked.data[:-1])
    res = runner.invoke(main, ["dump-sa", "--text", str(p)])
    assert res.exit_code == 0, res.output
    lines = res.output.strip().splitlines()
    assert lines[0] == "rank\tsa\tlcp\tbwt"
    assert len(lines) == worked.n + 1
    assert lines[1].split("\t")[1] == str(worked_ctx.sa[0])


def test_parse_validate_pipeline(runner, tmp_path, worked):
    p = tmp_path / "t.bin"
    p.write_bytes(worked.data[:-1])
    s = tmp_path / "lex.scheme"
    res = runner.invoke(main, ["parse", "--text", str(p), "--method", "lex", "--out", str(s)])
    assert res.exit_code == 0, res.output
    assert "11 phrases" in res.output
    res = runner.invoke(
        main, ["validate", "--scheme", str(s), "--text", str(p), "--order", "lex"]
    )
    assert res.exit_code == 0, res.output
    assert "OK: 11 phrases" in res.output
    # an LZ parse has copies that point forward in lexicographic rank
    res = runner.invoke(main, ["parse", "--text", str(p), "--method", "lz", "--out", str(s)])
    assert res.exit_code == 0
    res = runner.invoke(
        main, ["validate", "--scheme", str(s), "--text", str(p), "--order", "lex"]
    )
    assert res.exit_code == 2
    assert "ordered=False" in res.output


def test_parse_with_order_file(runner, tmp_path, worked):
    p = tmp_path / "t.bin"
    p.write_bytes(worked.data[:-1])
    ranks = tmp_path / "ranks.txt"
    ranks.write_text(" ".join(str(i) for i in range(worked.n)))
    res = runner.invoke(
        main,
        ["parse", "--text", str(p), "--method", "order", "--order-file", str(ranks)],
    )
    assert res.exit_code == 0, res.output
    assert "11 phrases" in res.output


def test_grammar_cli_roundtrip(runner, tmp_path, worked):
    p = tmp_path / "t.bin"
    p.write_bytes(worked.data[:-1])
    g = tmp_path / "t.rlslp"
    res = runner.invoke(
        main, ["grammar", "--build", "--text", str(p), "--out", str(g)]
    )
    assert res.exit_code == 0, res.output
    back = tmp_path / "back.bin"
    res = runner.invoke(main, ["grammar", "--expand", str(g), "--out", str(back)])
    assert res.exit_code == 0, res.output
    assert back.read_bytes() == worked.data[:-1]


def test_collage_cli_pipeline(runner, tmp_path, worked):
    p = tmp_path / "t.bin"
    p.write_bytes(worked.data[:-1])
    c = tmp_path / "t.collage"
    res = runner.invoke(
        main, ["collage", "--from-lz", "--text", str(p), "--out", str(c)]
    )
    assert res.exit_code == 0, res.output
    s = tmp_path / "t.scheme"
    res = runner.invoke(
        main,
        ["collage", "--to-scheme", "--in", str(c), "--text", str(p), "--out", str(s)],
    )
    assert res.exit_code == 0, res.output
    res = runner.invoke(main, ["validate", "--scheme", str(s), "--text", str(p)])
    assert res.exit_code == 0, res.output
    back = tmp_path / "back.bin"
    res = runner.invoke(main, ["collage", "--expand", "--in", str(c), "--out", str(back)])
    assert res.exit_code == 0, res.output
    assert back.read_bytes() == worked.data[:-1]


def test_oracle_cli(runner, tmp_path):
    p = tmp_path / "t.bin"
    p.write_bytes(b"aa")
    res = runner.invoke(main, ["oracle", "--op", "b", "--text", str(p)])
    assert res.exit_code == 0, res.output
    assert "b = 3" in res.output
    res = runner.invoke(main, ["oracle", "--op", "minparse", "--text", str(p), "--order", "text"])
    assert res.exit_code == 0 and "= 3" in res.output
    res = runner.invoke(main, ["oracle", "--op", "rotation", "--text", str(p)])
    assert res.exit_code == 0 and "starts at 0" in res.output


def test_oracle_budget_exit_code(runner, tmp_path, worked):
    p = tmp_path / "t.bin"
    p.write_bytes(worked.data[:-1])
    res = runner.invoke(main, ["oracle", "--op", "b", "--text", str(p)])
    assert res.exit_code == 1
    assert "error:" in res.output


def test_measure_family_sweep(runner):
    res = runner.invoke(
        main,
        ["measure", "--family", "fib", "--k", "8..12", "--step", "2", "--format", "tsv"],
    )
    assert res.exit_code == 0, res.output
    lines = res.output.strip().splitlines()
    assert [ln.split("\t")[0] for ln in lines[1:]] == ["fib-k8", "fib-k10", "fib-k12"]


def test_measure_needs_input(runner):
    res = runner.invoke(main, ["measure"])
    assert res.exit_code != 0
