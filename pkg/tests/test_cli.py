import csv
import io
import json
import subprocess
import sys

import pytest

from monotone.cli import main
from monotone.report import CSV_COLUMNS, emit_report, load_report, render_json
from monotone.scenario import load_scenario, parse_scenario
from monotone.verdict import Verdict

SMALL = {
    "name": "small", "seed": 3,
    "operators": {"box": {"catalog": "box1"}, "id": {"catalog": "identity"}},
    "checks": [
        {"theorem_id": "RegularityGap", "operator": "id", "params": {"queries": 10}},
        {"theorem_id": "Thm8", "operator": "box",
         "params": {"eps_list": [0.1], "grid": {"lo": -1, "hi": 2, "count": 7}}},
        {"theorem_id": "Lemma6", "operator": "box", "params": {"trials": 50}},
    ],
}


@pytest.fixture
def small(tmp_path):
    p = tmp_path / "small.json"
    p.write_text(json.dumps(SMALL))
    return p


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# --- check ------------------------------------------------------------------

def test_check_all_hold(small, tmp_path, capsys):
    code, _, err = run(["check", small, "--out", tmp_path / "r.json"], capsys)
    assert code == 0, err
    assert "3 verdicts hold" in err


def test_check_tight_tol_is_violation(small, tmp_path, capsys):
    code, _, err = run(["check", small, "--tol", "1e-15", "--out", tmp_path / "r.json"], capsys)
    assert code == 1
    assert "worst:" in err and "RegularityGap" in err


def test_check_corrupted_graph_exit2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({
        "operators": {"g": {"type": "finite_graph", "points": [[[0], [1]], [[1], [0]]]}},
        "checks": [{"theorem_id": "Lemma6", "operator": "g"}]}))
    code, _, err = run(["check", p], capsys)
    assert code == 2
    assert "#0" in err and "#1" in err


def test_check_missing_file(tmp_path, capsys):
    code, _, err = run(["check", tmp_path / "nope.json"], capsys)
    assert code == 2 and "nope.json" in err


def test_check_syntax_error_has_line_and_column(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text('{"checks": [\n  {"theorem_id": "Thm8",, }\n]}')
    code, _, err = run(["check", p], capsys)
    assert code == 2 and "broken.json:2:" in err


def test_check_field_diagnostic(tmp_path, capsys):
    bad = json.loads(json.dumps(SMALL))
    bad["checks"][0]["params"]["queries"] = -4
    p = tmp_path / "field.json"
    p.write_text(json.dumps(bad))
    code, _, err = run(["check", p], capsys)
    assert code == 2 and "checks[0].params.queries" in err


def test_check_unknown_operator_reference(tmp_path, capsys):
    bad = json.loads(json.dumps(SMALL))
    bad["checks"][0]["operator"] = "ghost"
    p = tmp_path / "ref.json"
    p.write_text(json.dumps(bad))
    code, _, err = run(["check", p], capsys)
    assert code == 2 and "ghost" in err


def test_unwritable_report_path(small, capsys):
    code, _, err = run(["check", small, "--out", "/nonexistent-dir/r.json"], capsys)
    assert code == 2 and "cannot write" in err


def test_bad_flag_value(small, capsys):
    code, _, _ = run(["check", small, "--tol", "-1"], capsys)
    assert code == 2


# --- reports ----------------------------------------------------------------

def test_csv_three_verdicts_four_lines(small, tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert run(["check", small, "--format", "csv", "--out", out], capsys)[0] == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 4
    assert tuple(lines[0].split(",")) == CSV_COLUMNS
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [r["theorem_id"] for r in rows] == ["RegularityGap", "Thm8", "Lemma6"]
    assert all(r["seed"] == "3" for r in rows)


def test_json_round_trip_is_lossless(small, tmp_path, capsys):
    out = tmp_path / "r.json"
    run(["check", small, "--out", out], capsys)
    verdicts, runtimes = load_report(out)
    assert render_json(verdicts) == out.read_text()
    assert runtimes == [None] * 3
    doc = json.loads(out.read_text())
    for v in doc["verdicts"]:
        assert set(v["provenance"]) == {"seed", "R", "h", "tol"}


def test_nonfinite_values_round_trip(tmp_path):
    v = Verdict("Thm9", False, float("inf"), [("x", [2.0])], {"tol": 1e-9, "eps": 1.0})
    p = tmp_path / "inf.json"
    emit_report([v], "json", p)
    (w,), _ = load_report(p)
    assert w.worst_violation == float("inf") and not w.holds


def test_float_format_17_digits(tmp_path):
    v = Verdict("Thm9", True, 0.1, [], {"tol": 1.0})
    p = tmp_path / "f.csv"
    emit_report([v], "csv", p)
    assert "0.10000000000000001" in p.read_text()


def test_golden_determinism(small, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["check", small, "--out", a], capsys)
    run(["check", small, "--out", b, "--jobs", "2"], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_timings_opt_in(small, tmp_path, capsys):
    out = tmp_path / "t.json"
    run(["check", small, "--out", out, "--timings"], capsys)
    _, runtimes = load_report(out)
    assert all(t is not None and t >= 0 for t in runtimes)


def test_report_command_converts_to_csv(small, tmp_path, capsys):
    src = tmp_path / "r.json"
    run(["check", small, "--out", src], capsys)
    code, out, _ = run(["report", src], capsys)
    assert code == 0 and out.splitlines()[0] == ",".join(CSV_COLUMNS)


def test_emit_report_rejects_empty():
    from monotone.errors import InvalidInput
    with pytest.raises(InvalidInput):
        emit_report([], "json", "-")


# --- seeds and overrides ----------------------------------------------------

def test_seed_precedence(small, monkeypatch):
    sc = load_scenario(small)
    assert sc.resolved({})[0] == 3
    assert sc.resolved({"seed": 9})[0] == 9
    del_seed = {k: v for k, v in SMALL.items() if k != "seed"}
    sc2 = parse_scenario(json.dumps(del_seed), "x.json")
    monkeypatch.setenv("MONOTONE_SEED", "11")
    assert sc2.resolved({})[0] == 11
    monkeypatch.delenv("MONOTONE_SEED")
    assert sc2.resolved({})[0] == 0


def test_flags_win_over_settings(tmp_path):
    doc = dict(SMALL, settings={"tol": 0.5, "format": "csv"})
    sc = parse_scenario(json.dumps(doc), "s.json")
    _, settings = sc.resolved({"tol": 0.25})
    assert settings["tol"] == 0.25 and settings["format"] == "csv"


def test_seed_changes_report(small, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["check", small, "--out", a], capsys)
    run(["check", small, "--out", b, "--seed", "4"], capsys)
    assert a.read_bytes() != b.read_bytes()


# --- other commands ---------------------------------------------------------

def test_validate_catalog_operator(capsys):
    code, out, _ = run(["validate", "--op", "rotation"], capsys)
    assert code == 0 and json.loads(out)["verdicts"][0]["holds"]


def test_validate_non_monotone_graph(capsys):
    g = json.dumps({"type": "finite_graph", "points": [[[0], [1]], [[1], [0]]]})
    code, _, err = run(["validate", "--op-json", g], capsys)
    assert code in (1, 2) and "#0" in err and "#1" in err


def test_slope_command(capsys):
    code, out, _ = run(["slope", "--op", "identity", "--x", "0", "--xstar", "2"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["distance"] == 2 and abs(data["slope"] - 2) <= 1e-3


def test_slope_command_enlarged(capsys):
    code, out, _ = run(["slope", "--op", "identity", "--x", "0", "--xstar", "2", "--eps", "0.5"],
                       capsys)
    assert code == 0 and abs(json.loads(out)["slope_enlarged"] - 1.5) <= 1e-3


def test_enlarge_membership(capsys):
    code, out, _ = run(["enlarge", "--op", "identity", "--eps", "1", "--x", "0", "--xstar", "0.5"],
                       capsys)
    assert code == 0 and json.loads(out)["member"] is True


def test_enlarge_probe(capsys):
    code, out, _ = run(["enlarge", "--op", "box1", "--eps", "0.7", "--probe", "-1", "2", "4"], capsys)
    pts = json.loads(out)["points"]
    # grid -1, 0, 1, 2 against the box [0, 1]
    assert code == 0 and [ne for _, ne in pts] == [False, True, True, False]


def test_enlarge_set_matches_image_plus_ball(capsys):
    code, out, _ = run(["enlarge", "--op", "identity", "--eps", "1", "--x", "0", "--set",
                        "--density", "0.001", "--radius", "4"], capsys)
    data = json.loads(out)
    assert code == 0
    for a, b in zip(data["support"], data["support_image_plus_ball"]):
        assert abs(a - b) <= 2e-3


def test_bad_vector(capsys):
    code, _, _ = run(["slope", "--op", "identity", "--x", "a", "--xstar", "1"], capsys)
    assert code == 2


def test_console_entry_point(small, tmp_path):
    out = tmp_path / "c.csv"
    r = subprocess.run([sys.executable, "-m", "monotone.cli", "check", str(small), "--format", "csv",
                        "--out", str(out)], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert len(out.read_text().splitlines()) == 4
