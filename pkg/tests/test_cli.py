import json
import subprocess
import sys

import jsonschema
import pytest

from descent0.cli import COMMANDS, run
from descent0.schemas import document_schema


def _doc(argv):
    res = run(argv)
    doc = json.loads(res.render())
    jsonschema.validate(doc, document_schema(res.command, res.status))
    return res, doc


def test_selmer_worked_instance():
    res, doc = _doc(["selmer", "--A", "17", "--B", "5", "--r", "23"])
    assert res.exit_code == 0 and doc["status"] == "ok" and doc["schema"] == "descent0/v1"
    p = doc["payload"]
    assert p["selmer_phi"] == ["1"]
    assert set(p["selmer_phihat"]) == {"1", "85", "-115", "-391"}
    assert (p["dim_phi"], p["dim_phihat"], p["rank_upper_bound"]) == (0, 2, 0)
    assert p["bad_places"] == ["inf", 2, 3, 5, 17, 23]


def test_report_is_data_not_error():
    res, doc = _doc(["check-thm2", "--A", "16", "--B", "5", "--r", "23"])
    assert res.exit_code == 0 and doc["payload"]["overall"] is False


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nonsense"],
        ["selmer"],
        ["selmer", "--A", "17"],
        ["selmer", "--A", "17", "--B", "5", "--a", "1", "--b", "2"],
        ["selmer", "--A", "17", "--B", "x"],
        ["selmer", "--A", "3", "--B", "3"],
        ["selmer", "--A", "17", "--B", "5", "--r", "12"],
        ["check-thm2", "--A", "17", "--B", "5"],
        ["density", "--family", "T2", "--A", "17", "--B", "5", "--variant", "proof", "--X", "10"],
        ["search", "--family", "T2", "--A", "17", "--B", "5", "--X", "100"],
        ["search", "--family", "T4", "--A", "17", "--B", "5"],
        ["simultaneous", "--input", "/nonexistent/file.jsonl"],
        ["thm1-demo", "--k", "0"],
        ["oracle-validate", "--primes", "2,x"],
    ],
)
def test_usage_errors(argv):
    res, doc = _doc(argv)
    assert res.exit_code == 2 and doc["status"] == "usage_error" and doc["payload"]["error"]


def test_every_command_round_trips(tmp_path):
    batch = tmp_path / "curves.jsonl"
    batch.write_text('{"A": 17, "B": 5}\n{"a": 4, "b": 3}\n')
    pair = tmp_path / "pair.jsonl"
    pair.write_text('{"A": 17, "B": 3}\n{"A": 41, "B": 3}\n')
    argvs = [
        ["selmer", "--A", "17", "--B", "5", "--r", "23"],
        ["selmer", "--input", str(batch), "--r", "23"],
        ["rank-bound", "--a", "4", "--b", "3", "--r", "31"],
        ["rank-bound", "--input", str(batch)],
        ["check-thm2", "--A", "17", "--B", "5", "--r", "23", "--variant", "proof"],
        ["check-thm3", "--A", "1", "--B", "3", "--r", "31"],
        ["check-thm4", "--a", "6", "--b", "6", "--r", "31", "--branch2", "literal"],
        ["search", "--family", "T2", "--A", "17", "--B", "5", "--variant", "proof", "--X", "100", "--certify"],
        ["search", "--family", "T3", "--A", "1", "--B", "3", "--X", "200"],
        ["search", "--family", "T4", "--a", "-30", "--b", "-26", "--X", "200"],
        ["density", "--family", "T2", "--A", "17", "--B", "5", "--variant", "proof", "--X", "10000"],
        ["simultaneous", "--input", str(pair), "--X", "100000"],
        ["thm1-demo", "--k", "1", "--x-max", "10000"],
        ["oracle-validate", "--seed", "3", "--count", "20"],
        ["point-search", "--a", "0", "--b", "-25", "--H", "10"],
        ["point-search", "--input", str(batch), "--r", "23", "--H", "5"],
    ]
    seen = set()
    for argv in argvs:
        res, doc = _doc(argv)
        assert res.status == "ok", (argv, doc)
        assert json.loads(json.dumps(doc, sort_keys=True)) == doc
        seen.add(res.command)
    assert seen == set(COMMANDS)


def test_certify_search_passes():
    _, doc = _doc(["search", "--family", "T2", "--A", "17", "--B", "-5", "--X", "100", "--certify"])
    assert doc["payload"]["primes"] == [79]
    assert doc["payload"]["certificates"][0]["pass"] is True


def test_certify_reports_mismatch():
    # the proof-variant counterexample twist fails certification
    res, doc = _doc(["search", "--family", "T2", "--A", "-7", "--B", "5", "--variant", "proof", "--X", "50", "--certify"])
    assert 47 in doc["payload"]["primes"]
    assert res.exit_code == 1 and doc["status"] == "mismatch"


def test_deterministic_output():
    argv = ["oracle-validate", "--seed", "11", "--count", "30"]
    assert run(argv).render() == run(argv).render()


def test_oracle_validate_ok():
    res, doc = _doc(["oracle-validate", "--seed", "42", "--count", "100"])
    assert res.exit_code == 0 and doc["payload"]["sound_disagreements"] == []


def test_csv_and_text():
    out = run(["--format", "csv", "check-thm3", "--A", "1", "--B", "3", "--r", "31"]).render()
    header = out.splitlines()[0].split(",")
    assert header[:2] == ["condition_id", "description"]
    assert "T3.ii" in out
    out = run(["--format", "csv", "selmer", "--A", "17", "--B", "5", "--r", "23"]).render()
    assert out.splitlines()[0] == "key,value"
    out = run(["--format", "text", "rank-bound", "--A", "17", "--B", "5", "--r", "23"]).render()
    assert out.splitlines()[0] == "rank-bound: ok"
    assert "  rank_upper_bound: 0" in out.splitlines()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "descent0", "rank-bound", "--A", "17", "--B", "5", "--r", "23"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["rank_upper_bound"] == 0
    proc = subprocess.run([sys.executable, "-m", "descent0", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 2


def test_format_after_subcommand():
    before = run(["--format", "text", "rank-bound", "--A", "17", "--B", "5", "--r", "23"]).render()
    after = run(["rank-bound", "--A", "17", "--B", "5", "--r", "23", "--format", "text"]).render()
    assert before == after
