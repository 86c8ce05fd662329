from __future__ import annotations

import json

from soint.cli import JobSpec, main, parse_coeffs, parse_instance, stratify_rows
from soint.formula import so_gl2


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_compute_from_coefficients(capsys):
    assert run(capsys, "compute", "--algebra", "gl", "--n", "2", "--coeffs", "0,2", "--p", "2", "--measure", "geometric") == (0, "3/4", "")


def test_compute_u2(capsys):
    assert run(capsys, "compute", "--algebra", "u", "--n", "2", "--serre", "0", "--ram", "ramified", "--q", "2")[:2] == (0, "3/4")


def test_compute_gl3_preset(capsys):
    assert run(capsys, "compute", "--algebra", "gl", "--n", "3", "--preset", "hyperbolic", "--q", "2")[:2] == (0, "21/8")


def test_compute_json_report(capsys):
    code, out, _ = run(capsys, "compute", "--n", "2", "--coeffs", "2,4", "--p", "2", "--emit", "json")
    data = json.loads(out)
    assert code == 0
    assert data["value"] == "1/1" and data["theorem"] == "gl2-elliptic-unramified"
    assert data["instance"]["serre"] == 1


def test_dmu_requires_assumption_flag(capsys):
    code, _, err = run(capsys, "compute", "--n", "2", "--coeffs", "0,2", "--p", "2", "--measure", "dmu")
    assert code == 2 and "char F" in err
    assert run(capsys, "compute", "--n", "2", "--coeffs", "0,2", "--p", "2", "--measure", "dmu", "--assume-char")[:2] == (0, "1/1")


def test_symbolic_output(capsys):
    code, out, _ = run(capsys, "compute", "--n", "2", "--preset", "elliptic-ramified", "--serre", "0", "--emit", "symbolic")
    assert code == 0 and out == "(q^2 - 1) / (q^2)"


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "compute", "--n", "2", "--coeffs", "0,-1", "--p", "3")
    assert code == 2 and err.startswith("error:")


def test_precision_error_exit_code(capsys):
    code, _, _ = run(capsys, "compute", "--n", "2", "--coeffs", "0,-4", "--p", "2", "--N", "3")
    assert code == 3


def test_budget_exit_code(capsys):
    code, _, _ = run(capsys, "verify", "--instance", "x^3+2", "--p", "2", "--scan-N", "3..3", "--budget", "10")
    assert code == 4


def test_verify_scan(capsys):
    code, out, _ = run(capsys, "verify", "--instance", "x^2+2", "--p", "2", "--scan-N", "1..3")
    assert code == 0
    assert out.startswith("PASS") and "volumes 1/1, 3/4, 3/4" in out


def test_verify_json_record(capsys):
    code, out, _ = run(capsys, "verify", "--instance", "x^2+2", "--p", "2", "--scan-N", "1..3", "--emit", "json")
    rec = json.loads(out)
    assert code == 0
    assert {k: rec[k] for k in ("instance", "formula_value", "oracle_value", "stabilized_at_N", "match")} == {
        "instance": "x^2+2",
        "formula_value": "3/4",
        "oracle_value": "3/4",
        "stabilized_at_N": 2,
        "match": True,
    }


def test_verify_mismatch_exit_code(capsys):
    # too few precisions to stabilize counts as a mismatch
    code, out, _ = run(capsys, "verify", "--instance", "x^2+2", "--p", "2", "--scan-N", "1..1")
    assert code == 5 and out.startswith("FAIL")


def test_verify_only_counts(capsys):
    code, out, _ = run(capsys, "verify", "--only", "counts")
    assert code == 0 and "FAIL" not in out


def test_stratify_gl2(capsys):
    code, out, _ = run(capsys, "stratify", "--n", "2", "--d", "2", "--q", "2")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3 and lines[-1] == "total\t1/1"


def test_stratify_rows_sum_to_closed_form():
    rows, total = stratify_rows("gl", 2, 3)
    assert total == so_gl2(True, "ramified", 1).geometric
    rows, total = stratify_rows("gl", 3, 1)
    assert len(rows) == 1 and rows[0]["type"] == [1]


def test_stratify_u2(capsys):
    code, out, _ = run(capsys, "stratify", "--algebra", "u", "--n", "2", "--d", "1", "--d-prev", "1", "--q", "2")
    assert code == 0 and out.splitlines()[-1] == "total\t3/4"


def test_bounds_report(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "3", "--ram", "ramified", "--serre", "3", "--q", "2", "--emit", "json")
    data = json.loads(out)
    assert code == 0 and data["ordered"] is True
    code, out, _ = run(capsys, "bounds", "--algebra", "u", "--n", "2", "--ram", "ramified", "--serre", "2", "--q", "2")
    assert "ordered\tTrue" in out


def test_convert(capsys):
    assert run(capsys, "convert", "--n", "2", "--ram", "ramified", "--serre", "1", "--q", "2", "--assume-char")[:2] == (0, "3/1")
    back = run(capsys, "convert", "--n", "2", "--ram", "ramified", "--serre", "1", "--p", "2",
               "--measure", "dmu", "--assume-char")
    assert back[:2] == (0, "9/8")


def test_parsers():
    assert parse_coeffs("0,2", "gl") == (0, 2)
    assert parse_coeffs("0:0,1:2", "u") == ((0, 0), (1, 2))
    assert parse_instance("x^2+2x+2") == (2, (2, 2))
    assert parse_instance("x^3+2") == (3, (0, 0, 2))


def test_jobspec_round_trip():
    job = JobSpec("compute", "u", 2, ((0, 0), (3, 0)), None, 3, None, "geometric", 0, "ramified")
    job.validate()
    assert JobSpec.from_json(json.loads(json.dumps(job.to_json()))) == job


def test_budget_environment_override(monkeypatch):
    from soint.oracle.volume import budget_from_env

    monkeypatch.setenv("SO_BUDGET", "2^10")
    assert budget_from_env() == 1024
