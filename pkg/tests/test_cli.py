import csv
import hashlib
import json
import math

import pytest

from polylcm.cli import main
from polylcm.output import header_hash, read_manifest, render_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_census_with_oracle(tmp_path, capsys):
    code, out, _ = run(capsys, "census", "--n", "3", "--q", "2,3,4", "--oracle", "--out", str(tmp_path), "--quiet")
    assert code == 0 and out == ""
    m = read_manifest(tmp_path / "census.manifest.json")
    assert m["summary"]["all_equal"] is True
    rows = rows_of(tmp_path / "census.csv")
    assert len(rows) == 9
    assert all(r["exact"] == r["brute_force"] for r in rows)
    assert {r["delta"] for r in rows} == {"1/3", "1/2", "1/6"}


def test_manifest_records_files_and_hashes(tmp_path, capsys):
    code, out, _ = run(capsys, "factor-field", "--field", "x^2+1", "--pmax", "13", "--out", str(tmp_path))
    assert code == 0
    assert json.loads(out)["manifest"].endswith("factor_field.manifest.json")
    m = read_manifest(tmp_path / "factor_field.manifest.json")
    assert m["schema_version"] == 1 and m["command"] == "factor-field"
    assert m["parameters"]["field"] == "x^2+1" and m["parameters"]["pmax"] == 13
    entry = m["files"]["main"]
    text = (tmp_path / entry["file"]).read_text()
    assert hashlib.sha256(text.encode()).hexdigest() == entry["sha256"]
    assert entry["header_sha256"] == header_hash(text.splitlines()[0].split(","))
    rows = rows_of(tmp_path / "factor_field.csv")
    assert [(r["p"], r["e"], r["f"]) for r in rows if r["p"] in ("2", "3")] == [("2", "2", "1"), ("3", "1", "2")]
    assert sum(1 for r in rows if r["p"] == "13") == 2


def test_output_directory_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("POLYLCM_OUT", str(tmp_path / "env"))
    assert run(capsys, "census", "--n", "2", "--quiet")[0] == 0
    assert (tmp_path / "env" / "census.csv").exists()


def test_psi_degree_check_matches_integer_lcm(tmp_path, capsys):
    code, *_ = run(capsys, "psi", "--f", "x^2+1", "--M", "5,30", "--degree-check", "--out", str(tmp_path), "--quiet")
    assert code == 0
    rows = rows_of(tmp_path / "psi.csv")
    assert int(rows[0]["lcm_norm"]) == math.lcm(2, 5, 10, 17, 26)
    assert all(r["integer_lcm_equal"] == "1" for r in rows)
    assert float(rows[0]["psi"]) == pytest.approx(math.log(2210), rel=1e-12)


def test_psi_rejects_degree_one(tmp_path, capsys):
    code, _, err = run(capsys, "psi", "--f", "x+1", "--M", "10", "--out", str(tmp_path))
    assert code == 2
    msg = json.loads(err)
    assert msg["error"] == "parameter" and "linear" in msg["message"]


@pytest.mark.parametrize(
    "field,kind",
    [("x^2+4", "non_monogenic_field"), ("x^2+y", "field_spec"), ("x^2-1", "field_spec")],
)
def test_field_errors_exit_three(tmp_path, capsys, field, kind):
    code, _, err = run(capsys, "factor-field", "--field", field, "--out", str(tmp_path))
    assert code == 3
    assert json.loads(err)["error"] == kind


def test_unsupported_field_for_psi(tmp_path, capsys):
    code, _, err = run(capsys, "psi", "--field", "x^2-2", "--f", "x^2+1", "--M", "10", "--out", str(tmp_path))
    assert code == 3 and json.loads(err)["error"] == "unsupported_field"


def test_parameter_errors_exit_two(tmp_path, capsys):
    assert run(capsys, "psi-ensemble", "--n", "3", "--N", "0", "--M", "10", "--out", str(tmp_path))[0] == 2
    assert run(capsys, "lemma11", "--n", "3", "--N", "10", "--primes", "2", "--xi", "1.5", "--out", str(tmp_path))[0] == 2
    code, _, err = run(capsys, "linear", "--alpha", "2", "--nu", "4", "--M", "10", "--out", str(tmp_path))
    assert code == 2 and json.loads(err)["error"] == "parameter"


def test_budget_error_exit_four(tmp_path, capsys):
    code, _, err = run(capsys, "census", "--n", "8", "--q", "9", "--oracle", "--out", str(tmp_path))
    assert code == 4 and json.loads(err)["error"] == "budget_exceeded"


def test_certify_single_polynomial(tmp_path, capsys):
    code, out, _ = run(capsys, "certify", "--f", "x^3-x-1", "--out", str(tmp_path))
    assert code == 0
    assert json.loads(out)["summary"]["status"] == "CertifiedSn"
    roles = {r["role"] for r in rows_of(tmp_path / "certify.csv")}
    assert roles == {"n-cycle", "transposition"}


def test_replay_is_byte_identical(tmp_path, capsys):
    first = tmp_path / "first"
    code, *_ = run(capsys, "psi-ensemble", "--n", "3", "--N", "60", "--M", "40,80", "--samples", "4",
                   "--seed", "11", "--out", str(first), "--quiet")
    assert code == 0
    assert run(capsys, "replay", str(first / "psi_ensemble.manifest.json"), "--quiet")[0] == 0
    again = first / "replay"
    for name in ("psi_ensemble.csv", "psi_ensemble_samples.csv"):
        assert (first / name).read_bytes() == (again / name).read_bytes()
    a = read_manifest(first / "psi_ensemble.manifest.json")
    b = read_manifest(again / "psi_ensemble.manifest.json")
    assert a["files"] == b["files"] and a["parameters"] == b["parameters"]


def test_replay_rejects_other_schema(tmp_path, capsys):
    bad = tmp_path / "bad.manifest.json"
    bad.write_text(json.dumps({"schema_version": 99, "parameters": {}}))
    assert run(capsys, "replay", str(bad))[0] == 2


def test_csv_cells():
    text = render_csv([{"a": 0.1, "b": [1, 2], "c": None}], ["a", "b", "c"])
    assert text.splitlines() == ["a,b,c", "0.1,1;2,"]
