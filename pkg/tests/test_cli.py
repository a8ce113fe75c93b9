import json
import subprocess
import sys

import pytest

from pgi import cli
from pgi.report import VerificationReport
from pgi.verification import suites as suites_mod
from pgi.verification.claims import emit

SMALL = {"f1_n": [1, 3], "f1_extras": [[]], "f2_n": [2, 3], "f2_astar": [[1]], "maximal_class_n": [3, 3],
         "k1_family_n": [4, 4], "q8_products": False, "sharpness": [[2, 1]], "odd_primes": [],
         "odd_extras": False, "permutation_groups": True, "aut_b_params": [], "kummer_primes": [2],
         "kummer_max_m": 2}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_family_flags(capsys):
    code, out, _ = run(capsys, "construct", "--family", "f1", "--n", "3", "--s", "-1", "--bsq", "0")
    assert code == 0
    assert "order=16" in out and "dedekind=false" in out and "f1_member" in out


def test_construct_example_and_export(capsys, tmp_path):
    path = tmp_path / "g.json"
    code, out, _ = run(capsys, "construct", "--example", "--p", "3", "--k", "1", "--out", str(path))
    assert code == 0 and "order=81" in out and "center=9" in out
    doc = json.loads(path.read_text())
    assert doc["group"]["order"] == 81 and len(doc["group"]["mul"]) == 81


def test_spec_file_wins_over_flags(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text('{"kind": "sharpness_example", "p": 2, "k": 1}')
    code, out, _ = run(capsys, "construct", "--spec", str(path), "--name", "A5")
    assert code == 0 and "order=16" in out


def test_malformed_json_exit_2(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"kind": "f1",\n "n": }')
    code, _, err = run(capsys, "construct", "--spec", str(path))
    assert code == 2 and "line 2" in err


def test_invalid_field_exit_2(capsys):
    code, _, err = run(capsys, "construct", "--family", "f1", "--n", "2", "--s=-1+2^(n-1)", "--bsq", "0")
    assert code == 2 and "n >= 3" in err


def test_missing_group_selection_exit_2(capsys):
    code, _, err = run(capsys, "invariants")
    assert code == 2 and "select a group" in err


def test_argparse_usage_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["construct", "--n", "notanumber"])
    assert exc.value.code == 2


def test_invariants_a5(capsys):
    code, out, _ = run(capsys, "invariants", "--name", "A5")
    assert code == 0 and out.startswith("mni=3 mni*=2 mci*=2")


def test_invariants_dedekind(capsys):
    code, out, _ = run(capsys, "invariants", "--name", "Q8")
    assert code == 0 and "undefined (Dedekind)" in out


def test_invariants_q16(capsys):
    code, out, _ = run(capsys, "invariants", "--name", "Q16")
    assert code == 0 and "mci*=1" in out


def test_cap_overflow_exit_3(capsys):
    code, _, err = run(capsys, "invariants", "--name", "D32", "--order-cap", "16")
    assert code == 3 and "cap" in err


def test_env_cap_overflow_exit_3(capsys, monkeypatch):
    monkeypatch.setenv("PGI_ORDER_CAP", "8")
    code, _, _ = run(capsys, "construct", "--name", "D16")
    assert code == 3


def test_subgroups_json(capsys, tmp_path):
    path = tmp_path / "lat.json"
    code, out, _ = run(capsys, "subgroups", "--name", "D8", "--format", "json", "--out", str(path))
    assert code == 0 and "subgroups=10" in out
    assert len(json.loads(path.read_text())["subgroups"]) == 10


def test_unknown_suite_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--suite", "nosuch", "--out", str(tmp_path / "r.tsv"))
    assert code == 2 and "nosuch" in err
    assert not (tmp_path / "r.tsv").exists()


def _config(tmp_path, **extra):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({**SMALL, **extra}))
    return str(path)


def test_verify_json_report(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--suite", "f2_values", "--format", "json", "--config",
                       _config(tmp_path), "--out", str(out_path))
    assert code == 0 and out.startswith("pass=") and "fail=0" in out
    doc = json.loads(out_path.read_text())
    assert doc["summary"]["fail"] == 0 and doc["rows"]


def test_verify_reports_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    cfg = _config(tmp_path)
    assert run(capsys, "verify", "--config", cfg, "--out", str(a))[0] == 0
    assert run(capsys, "verify", "--config", cfg, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_failure_exit_1(capsys, tmp_path, monkeypatch):
    def failing(corpus, facts, cfg):
        rep = VerificationReport()
        emit(rep, "synthetic", "binomial_valuation", False, "0", "1", "injected")
        return rep

    patched = dict(suites_mod.SUITES)
    patched["kummer"] = suites_mod.Suite("kummer", ("binomial_valuation",), None, failing)
    monkeypatch.setattr("pgi.verification.runner.SUITES", patched)
    code, out, _ = run(capsys, "verify", "--suite", "kummer", "--config", _config(tmp_path),
                       "--out", str(tmp_path / "r.tsv"))
    assert code == 1 and "FAIL synthetic" in out


def test_verify_strict_cap_exit_3(capsys, tmp_path):
    cfg = _config(tmp_path, sharpness=[[5, 2]])
    args = ["verify", "--suite", "theorem_a", "--config", cfg, "--out", str(tmp_path / "r.tsv")]
    assert run(capsys, *args)[0] == 0
    code, out, _ = run(capsys, *args, "--strict")
    assert code == 3 and "skipped for size" in out


def test_corpus_listing(capsys, tmp_path):
    code, out, _ = run(capsys, "corpus", "--prime", "3")
    assert code == 0 and out.startswith("entries=")
    path = tmp_path / "c.json"
    code, _, _ = run(capsys, "corpus", "--config", _config(tmp_path), "--format", "json", "--out", str(path))
    assert code == 0 and json.loads(path.read_text())["entries"]


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pgi.cli", "invariants", "--name", "D8"], capture_output=True,
                          text=True)
    assert proc.returncode == 0 and "mni=2" in proc.stdout
