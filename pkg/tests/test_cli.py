import json

import pytest

from steinlat.cli import (EXIT_BUDGET, EXIT_CHECK_FAILURE, EXIT_OK,
                          EXIT_USAGE, SCHEMA_VERSION, diff_reports,
                          load_fixture, main)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- predict ----------------------------------------------------------------


def test_predict_json(capsys):
    code, out, _ = run(capsys, "predict", "--n", "6", "--q", "5",
                       "--ell", "2")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["schema_version"] == SCHEMA_VERSION
    assert rep["V"] == 5
    assert rep["star_count"] == 6
    assert rep["star_table"]["1"] == ["2^3", "41^2"]
    assert rep["injectivity"]["injective"] is False


def test_predict_markdown(capsys):
    code, out, _ = run(capsys, "predict", "--n", "6", "--q", "5",
                       "--ell", "2", "--format", "markdown")
    assert code == EXIT_OK
    assert "| c | P*(c) |" in out
    assert "2^3, 41^2" in out
    assert "V = 5" in out


def test_predict_deterministic(capsys):
    argv = ("predict", "--n", "10", "--q", "5", "--ell", "2")
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv)
    assert out1 == out2


def test_predict_out_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "predict", "--n", "6", "--q", "5",
                       "--ell", "2", "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["V"] == 5


# -- fixtures ---------------------------------------------------------------


@pytest.mark.parametrize("name", ["tatin1", "tatin2"])
def test_fixture_match(capsys, name):
    code, out, _ = run(capsys, "predict", "--fixture", name)
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["match"] is True and rep["diffs"] == []


def test_fixture_values():
    t1 = load_fixture("tatin1")
    assert t1["context"]["n"] == 6 and t1["V"] == 5
    t2 = load_fixture("tatin2")
    assert t2["context"]["n"] == 10 and t2["V"] == 9
    assert t2["star_count"] == 14
    assert sum(len(v) for v in t2["star_table"].values()) == 14


def test_diff_reports_detects_tampering():
    golden = load_fixture("tatin1")
    tampered = json.loads(json.dumps(golden))
    tampered["V"] = 99
    del tampered["star_count"]
    tampered["extra_key"] = 1
    diffs = diff_reports(tampered, golden)
    joined = "\n".join(diffs)
    assert "/V" in joined
    assert "star_count" in joined and "missing" in joined
    assert "extra_key" in joined and "extra" in joined


def test_unknown_fixture(capsys):
    code, _, err = run(capsys, "predict", "--fixture", "nope")
    assert code == EXIT_USAGE


# -- usage and parameter errors ---------------------------------------------


def test_missing_required_args(capsys):
    code, _, err = run(capsys, "predict")
    assert code == EXIT_USAGE and "usage error" in err


def test_unknown_flag(capsys):
    code, _, err = run(capsys, "predict", "--n", "6", "--q", "5",
                       "--ell", "2", "--frobnicate", "1")
    assert code == EXIT_USAGE


def test_bad_parameters(capsys):
    # ell divides q: parameter error, not a crash
    code, _, err = run(capsys, "verify", "--n", "2", "--q", "5",
                       "--ell", "5")
    assert code == EXIT_USAGE and "parameter error" in err


def test_unknown_check_name(capsys):
    code, _, err = run(capsys, "verify", "--n", "2", "--q", "2",
                       "--ell", "3", "--checks", "bogus")
    assert code == EXIT_USAGE


# -- verify -----------------------------------------------------------------


def test_verify_small_context(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--q", "2",
                       "--ell", "3")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["passed"] is True
    assert rep["c_length"] == 2
    assert rep["filtration_dims"] == {"0": [2, 1], "1": [1, 1]}
    assert {c["status"] for c in rep["checks"]} <= {"pass", "skip", "info"}


def test_verify_markdown(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--q", "2",
                       "--ell", "3", "--format", "markdown")
    assert code == EXIT_OK
    assert "| c | dim L(c) | dim M(c) |" in out
    assert "| check | status |" in out


def test_verify_checks_subset(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--q", "3",
                       "--ell", "2", "--checks",
                       "pvalue_support,dual_dims")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert [c["name"] for c in rep["checks"]] == ["pvalue_support",
                                                  "dual_dims"]


def test_verify_battery_budget(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--q", "2",
                       "--ell", "3", "--budget-dim", "1")
    assert code == EXIT_BUDGET
    rep = json.loads(out)
    assert all(c["status"] == "skip" for c in rep["checks"])


def test_verify_coset_budget(capsys):
    code, out, _ = run(capsys, "verify", "--n", "6", "--q", "5",
                       "--ell", "2", "--budget-cosets", "100")
    assert code == EXIT_BUDGET
    assert "coset budget exceeded" in json.loads(out)["error"]


# -- sweep ------------------------------------------------------------------


def test_sweep_small(capsys):
    code, out, _ = run(capsys, "sweep", "--n-list", "2", "--q-list", "2,3")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["command"] == "sweep"
    assert all(row["passed"] for row in rep["results"])
    # (2,2): l=3; (2,3): l=2 — both nondegenerate grids are found
    seen = {(row["n"], row["q"], row["ell"]) for row in rep["results"]}
    assert (2, 2, 3) in seen and (2, 3, 2) in seen


def test_sweep_explicit_bad_ell(capsys):
    code, out, _ = run(capsys, "sweep", "--n-list", "2", "--q-list", "2",
                       "--ell-list", "2")
    assert code == EXIT_OK          # the error is reported per-row
    rep = json.loads(out)
    assert any("error" in row for row in rep["results"])


def test_sweep_bad_list(capsys):
    code, _, err = run(capsys, "sweep", "--n-list", "2;3",
                       "--q-list", "2")
    assert code == EXIT_USAGE
