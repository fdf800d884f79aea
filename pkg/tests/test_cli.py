import csv
import io
import json
from fractions import Fraction

import pytest

from latticewalk import cli
from latticewalk.cli import emit_limit_table, parse_range, run
from latticewalk.suite import CheckResult


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_kingman_spectrum_json(capsys):
    code, out, _ = invoke(capsys, "spectrum", "--family", "kingman", "--theta", "1", "--alpha", "1/4",
                          "--n", "4", "--backend", "exact")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == "1"
    assert {e["value"]: e["multiplicity"] for e in data["spectrum"]} == {"1/1": 1, "3/4": 1, "7/16": 1, "0/1": 2}


def test_plancherel_separation_csv(capsys):
    code, out, _ = invoke(capsys, "separation", "--family", "young", "--measure", "plancherel", "--n", "3",
                          "--r", "0..10")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 11
    assert rows[3]["s_star"] == "1/9"
    assert {rows[3]["arg_x"], rows[3]["arg_y"]} == {"3", "1+1+1"}


def test_verify_suite(capsys):
    code, out, _ = invoke(capsys, "verify", "--all", "--max-n", "6")
    assert code == 0
    assert "FAIL" not in out
    assert out.strip().endswith("0 failed")


def test_kernel_csv_layout(capsys):
    code, out, _ = invoke(capsys, "kernel", "--family", "pascal", "--p", "1/3", "--n", "2")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["state", "(0,2)", "(1,2)", "(2,2)"]
    assert rows[1] == ["(0,2)", "2/3", "1/3", "0/1"]


def test_output_is_deterministic(capsys, tmp_path):
    argv = ["kernel", "--family", "young", "--s1", "1", "--s2", "3/2", "--n", "5", "--format", "json"]
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["--output", str(first)] + argv) == 0
    assert run(["--output", str(second)] + argv) == 0
    assert first.read_bytes() == second.read_bytes()
    assert json.loads(first.read_text())["measure"] == {"measure": "z", "s1": "1/1", "s2": "3/2"}


def test_mixing_time(capsys):
    code, out, _ = invoke(capsys, "mixing-time", "--family", "young", "--s2", "1", "--n", "3", "--brute-force")
    data = json.loads(out)
    assert code == 0
    assert data["expected_time"] == "13/4" and data["sandwich"] == {"lower": True, "upper": True}


def test_tv_profile(capsys):
    code, out, _ = invoke(capsys, "tv", "--family", "boolean", "--ambient", "4", "--n", "2", "--start", "{1,2}",
                          "--r", "0..4")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert rows[0]["tv"] == "5/6"
    assert all(float(r["spectral_bound"]) >= float(Fraction(r["tv"])) - 1e-12 for r in rows)


def test_shift_check(capsys):
    code, out, _ = invoke(capsys, "shift-check", "--family", "kingman", "--theta", "1", "--alpha", "1/2",
                          "--n", "3", "--R", "15")
    assert code == 0 and json.loads(out)["holds"] is True


def test_limits_command(capsys):
    code, out, _ = invoke(capsys, "limits", "--kind", "coupon_plancherel", "--c=-1,0,1", "--n-values", "6,7")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["c", "n=6", "n=7", "limit"]
    assert float(rows[2][-1]) == pytest.approx(0.26424111765711533)


def test_limit_table_shapes():
    assert emit_limit_table("kingman_theta1", []) == "c,n=20,n=40,limit\n"
    rows = list(csv.reader(io.StringIO(emit_limit_table("kingman_theta1", [0.5], [20, 40]))))
    assert len(rows[1]) == 4


@pytest.mark.parametrize("argv", [
    ["spectrum", "--family", "boolean", "--n", "2"],
    ["spectrum", "--family", "young", "--measure", "pitman", "--theta", "1", "--n", "2"],
    ["spectrum", "--family", "young", "--s2", "-1", "--n", "2"],
    ["separation", "--family", "young", "--n", "3", "--r", "a..b"],
    ["spectrum", "--family", "nope", "--n", "2"],
    ["tv", "--family", "pascal", "--n", "2", "--start", "(9,9)"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = invoke(capsys, *argv)
    assert code == 2


def test_capacity_error(capsys):
    code, _, err = invoke(capsys, "spectrum", "--family", "subspace", "--ambient", "7", "--n", "2")
    assert code == 3 and "error" in err


def test_capacity_from_state_cap(capsys, monkeypatch):
    monkeypatch.setenv("LATTICEWALK_MAX_STATES", "5")
    code, _, _ = invoke(capsys, "kernel", "--family", "young", "--n", "6")
    assert code == 3


def test_range_parser():
    assert parse_range("0..3") == [0, 1, 2, 3]
    assert parse_range("1,4") == [1, 4]
    assert parse_range("7") == [7]


def test_verification_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "run_suite", lambda max_n: iter([CheckResult("stub", False, "forced")]))
    code, out, err = invoke(capsys, "verify", "--max-n", "2")
    assert code == 1
    assert "FAIL stub: forced" in out and "verification failed" in err
