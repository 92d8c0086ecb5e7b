import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import pytest

from wordchar import cli
from wordchar.algebra import ExactPolynomial, ExactRationalFunction
from wordchar.cli import main
from wordchar.engine import InvariantViolation, clear_cache, expected_characters
from wordchar.report import SPECTRAL_COLUMNS, emit_report, format_rational, render_csv, render_json
from wordchar.symmetric import YoungDiagram

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def restore_budget(monkeypatch):
    # --budget writes the environment variable; register it so monkeypatch restores it
    monkeypatch.setenv("WORDCHAR_BUDGET", "10000000")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expected_char_text(capsys):
    code, out, _ = run(capsys, "expected-char", "--word", "aBAb", "--lambda", "1", "--eval", "4")
    assert code == 0
    assert out == "E: 1 / (n - 1)\nn=4: 1/3\n"


def test_expected_char_json_round_trip(capsys):
    code, out, _ = run(capsys, "expected-char", "--word", "abAB", "--lambda", "1,1", "--eval", "6", "--json")
    assert code == 0
    payload = json.loads(out)
    E = ExactRationalFunction.from_json(payload["rational"])
    assert E == expected_characters("abAB", 2).values[YoungDiagram((1, 1))]
    assert payload["evals"] == [{"n": 6, "value": "1/10"}]
    assert list(payload) == sorted(payload)
    assert all("/" in c for c in payload["rational"]["num"] + payload["rational"]["den"])


@pytest.mark.parametrize("argv, golden", [
    (["expected-char", "--word", "aBAb", "--lambda", "1", "--eval", "4", "5", "--json"], "expected_char_aBAb_1.json"),
    (["weingarten", "--sigma", "{{1,2}}", "--tau", "{{1},{2}}", "--eval", "5", "--json"], "weingarten_12_1_2.json"),
])
def test_json_matches_golden_bytes(capsys, argv, golden):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_repeated_runs_are_byte_identical(capsys):
    argv = ["mc", "--word", "abAB", "--lambda", "1", "--n", "20", "--samples", "2000", "--seed", "3", "--json"]
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_output_file(capsys, tmp_path):
    target = tmp_path / "e.json"
    code, out, _ = run(capsys, "expected-char", "--word", "aa", "--lambda", "1", "--json", "-o", str(target))
    assert code == 0 and out == ""
    assert ExactRationalFunction.from_json(json.loads(target.read_text())["rational"]) == ExactRationalFunction(1)


@pytest.mark.parametrize("argv", [
    ["expected-char", "--word", "aA(", "--lambda", "1"],
    ["expected-char", "--word", "abAB", "--lambda", "1", "--bogus"],
    ["expected-char", "--word", "abAB"],
    ["expected-char", "--word", "abAB", "--lambda", "1", "--eval", "1"],
    ["expected-char", "--word", "abAB", "--lambda", "3,4"],
    ["--budget", "0", "expected-char", "--word", "ab", "--lambda", "1"],
    ["--threads", "0", "expected-char", "--word", "ab", "--lambda", "1"],
    ["--budget", "5", "expected-char", "--word", "abAB", "--lambda", "1,1"],
    ["no-such-command"],
])
def test_usage_errors_exit_2(capsys, argv):
    clear_cache()
    assert run(capsys, *argv)[0] == 2


def test_invariant_violation_exits_1(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise InvariantViolation("euler bound", "graph details")

    monkeypatch.setattr(cli, "expected_characters", boom)
    code, _, err = run(capsys, "expected-char", "--word", "abAB", "--lambda", "1")
    assert code == 1
    assert "invariant violated: euler bound" in err and "graph details" in err


def test_weingarten_text(capsys):
    code, out, _ = run(capsys, "weingarten", "--sigma", "{{1,2}}", "--tau", "{{1},{2}}")
    assert code == 0
    assert out == "Wg: -1 / (n^2 - n)\n"


def test_spectral_gap_csv_columns(capsys, tmp_path):
    side = tmp_path / "rows.csv"
    code, out, _ = run(capsys, "spectral-gap", "--n", "12", "--k", "2", "--r", "2", "--seeds", "0,1",
                       "--format", "csv", "--csv", str(side))
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == SPECTRAL_COLUMNS
    assert [r[0] for r in rows[1:]] == ["0", "1"]
    assert all(r[-1] == "true" for r in rows[1:])
    assert side.read_text() == out


def test_phi_check(capsys):
    code, out, _ = run(capsys, "phi", "--word", "abAB", "--K", "1", "--check")
    assert code == 0
    assert "taylor: 0, 0" in out


def test_poly_form(capsys):
    code, out, _ = run(capsys, "poly-form", "--word", "abAB", "--lambda", "1", "--q", "4", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["within_bound"] is True
    assert payload["degree"] <= payload["bound"]


def test_projection_check(capsys):
    code, out, _ = run(capsys, "projection-check", "--lambda", "1", "--n", "5")
    assert code == 0
    assert out.endswith("passed: True\n")


def test_exhaustive(capsys):
    code, out, _ = run(capsys, "exhaustive", "--word", "aa", "--lambda", "1", "--n", "4", "--json")
    assert code == 0
    assert json.loads(out)["value"] == "1/1"


def test_regress_subset(capsys):
    code, out, _ = run(capsys, "regress", "--only", "C7")
    assert code == 0
    assert out.startswith("[PASS] C7 ")
    code, out, _ = run(capsys, "regress", "--only", "C2", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True and [r["key"] for r in payload["results"]] == ["C2"]


def test_report_helpers(capsys):
    assert render_json({"b": Fraction(3), "a": [Fraction(1, 2)]}) == '{\n  "a": [\n    "1/2"\n  ],\n  "b": "3/1"\n}\n'
    f = ExactRationalFunction(ExactPolynomial([0, 1]), ExactPolynomial([-1, 0, 1]))
    assert format_rational(f) == "n / (n^2 - 1)"
    assert format_rational(ExactRationalFunction(1, ExactPolynomial([-1, 1])), "x") == "1 / (x - 1)"
    assert render_csv([{"x": 1.5, "y": None, "z": True}], ("z", "y", "x")) == "z,y,x\ntrue,,1.5\n"
    with pytest.raises(ValueError):
        emit_report([], "csv")
    with pytest.raises(ValueError):
        emit_report({}, "yaml")
    emit_report({"v": Fraction(1, 3)}, "text")
    assert capsys.readouterr().out == "v: 1/3\n"
