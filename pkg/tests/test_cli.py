import json
import subprocess
import sys

import pytest

from dp4kit.cli import SCHEMA, build_parser, main, run

SUBCOMMANDS = [
    "classify", "lines", "invariants", "xi", "lattice", "numerology", "cases", "generate",
    "fiber", "discriminant", "census", "basepoints", "rrcount", "figure1", "expected-dims",
]


def call(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_numerology_height_12(capsys):
    code, out, _ = call(["numerology", "--height", "12"], capsys)
    assert code == 0
    assert json.loads(out) == {"schema": SCHEMA, "h": 12, "delta": 24, "chi": -8, "chiOmega1": 5, "params": 17}


def test_numerology_all_rows(capsys):
    code, out, _ = call(["numerology", "--all"], capsys)
    rows = json.loads(out)["rows"]
    assert [r["h"] for r in rows] == list(range(0, 43, 2))


def test_rrcount(capsys):
    code, out, _ = call(["rrcount", "--deg", "12", "--genus", "15"], capsys)
    assert code == 0
    assert json.loads(out)["count"] == 1


def test_cases_tsv(capsys):
    code, out, _ = call(["cases", "--tsv"], capsys)
    lines = out.strip().splitlines()
    assert len(lines) == 11
    heights = [ln.split("\t")[-1] for ln in lines[1:]]
    assert heights[:3] == ["20n", "20n+10", "20n+8"]


def test_lattice_summary(capsys):
    code, out, _ = call(["lattice"], capsys)
    js = json.loads(out)
    assert (js["weylOrder"], js["discriminantGroup"], js["canonicalSquare"]) == (1920, [4], 4)
    assert js["orbitE1EqualsExceptional"]


def test_lattice_table_file_tsv(tmp_path, capsys):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"labels": ["a", "b"], "gram": [[2, 1], [1, -2]]}))
    code, out, _ = call(["lattice", "--table", str(path), "--expr", "a+b", "--tsv"], capsys)
    assert code == 0
    assert out.splitlines() == ["expr\tselfIntersection\tpair_a\tpair_b\tgenus", "a+b\t2\t3\t-1\t2"]


def test_lattice_builtin_pairing(capsys):
    code, out, _ = call(["lattice", "--table", "quartic", "--pair", "C", "2h - R"], capsys)
    assert json.loads(out)["pairing"]["value"] == 5


def test_generate_discriminant_census_pipeline(tmp_path, capsys):
    model = tmp_path / "m.json"
    code, _, _ = call(["generate", "--case", "1", "--parity", "odd", "--n", "0", "--p", "3", "--seed", "1", "-o", str(model)], capsys)
    assert code == 0
    code, out, _ = call(["discriminant", str(model)], capsys)
    assert json.loads(out)["projectiveDegree"] == 20
    code, out, _ = call(["census", str(model), "--deg", "1"], capsys)
    js = json.loads(out)
    assert js["kind"] == "census"
    assert len(js["sections"]) == 17
    code, out4, _ = call(["census", str(model), "--deg", "1", "--threads", "4"], capsys)
    assert out4 == out


def test_output_byte_identical_across_runs(capsys):
    argv = ["generate", "--case", "2", "--parity", "even", "--n", "0", "--p", "101", "--seed", "3"]
    _, a, _ = call(argv, capsys)
    _, b, _ = call(argv, capsys)
    assert a == b


def test_budget_exit_code(tmp_path, capsys, monkeypatch):
    model = tmp_path / "m.json"
    call(["generate", "--case", "1", "--parity", "odd", "--n", "0", "--p", "7", "--seed", "1", "-o", str(model)], capsys)
    monkeypatch.setenv("DP4KIT_BUDGET", "1000")
    code, out, err = call(["census", str(model), "--deg", "1", "--no-counts"], capsys)
    assert code == 3
    js = json.loads(err)
    assert js["error"] == "budget" and js["partial"] is False


def test_unknown_flag_exit_2(capsys):
    code, _, err = call(["numerology", "--bogus"], capsys)
    assert code == 2
    assert json.loads(err)["kind"] == "error"


def test_missing_subcommand_exit_2(capsys):
    code, _, _ = call([], capsys)
    assert code == 2


def test_bad_height_exit_2(capsys):
    code, _, err = call(["numerology", "--height", "7"], capsys)
    assert code == 2
    assert json.loads(err)["schema"] == SCHEMA


def test_basepoints_split(capsys):
    code, out, _ = call(["basepoints", "--split", "--p", "7", "--gradient"], capsys)
    js = json.loads(out)
    assert js["count"] == 16
    assert js["multiplicityFree"] is True


def test_classify_two_nodes(capsys):
    code, out, _ = call(["classify", "--nodal", "--p", "101", "--rho", "1,0,0,0,-1"], capsys)
    js = json.loads(out)
    assert js["verdict"]["status"] == "strictly-semistable"
    assert len(js["verdict"]["singularPoints"]) == 2


def test_expected_dims(capsys):
    code, out, _ = call(["expected-dims"], capsys)
    rows = json.loads(out)["rows"]
    assert [r["contractedSections"] for r in rows] == [2, 4, 8, 16]
    assert [r["nodalModelDim"] for r in rows] == [None, 23, 26, 30]


def test_invariants_coefficient_array(tmp_path, capsys):
    path = tmp_path / "q.json"
    path.write_text("[0, 0, 1, -1, 0, 0]")
    code, out, _ = call(["invariants", str(path), "--p", "101"], capsys)
    assert json.loads(out)["invariants"] == {"I4": "58", "I8": "21", "I12": "23"}


def test_every_subcommand_has_help():
    parser = build_parser()
    sub = next(a for a in parser._actions if a.dest == "command")
    assert sorted(sub.choices) == sorted(SUBCOMMANDS)
    for name, p in sub.choices.items():
        assert p.format_help().strip()


def test_run_returns_command_result():
    result, _ = run(["rrcount", "--deg", "14", "--genus", "23"])
    assert result.status == 0
    assert result.payload["count"] == 1


@pytest.mark.parametrize("argv", [["cases"], ["lattice", "--list-tables"]])
def test_console_entry_point(argv):
    proc = subprocess.run([sys.executable, "-m", "dp4kit.cli", *argv], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["schema"] == SCHEMA


def test_lines_diagonal_over_extension_field(capsys):
    code, out, _ = call(["lines", "--diagonal", "0,1,2,3,4", "--p", "5", "--k", "2"], capsys)
    js = json.loads(out)
    assert code == 0
    assert js["field"] == {"p": 5, "k": 2}
    assert (js["count"], js["signOrbitSizes"]) == (16, [16])


def test_out_of_memory_is_reported_not_raised(capsys, monkeypatch):
    import dp4kit.cli as cli

    def boom(*args, **kwargs):
        raise MemoryError

    monkeypatch.setattr(cli, "lines_on_surface", boom)
    code, _, err = call(["lines", "--diagonal", "0,1,2,3,4", "--p", "7", "--force"], capsys)
    assert code == 3
    js = json.loads(err)
    assert js["error"] == "memory" and js["partial"] is False
