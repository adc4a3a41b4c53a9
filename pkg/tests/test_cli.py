import subprocess
import sys
from pathlib import Path

import pytest

from padicred.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    status = main(list(argv))
    cap = capsys.readouterr()
    return status, cap.out, cap.err


def test_verify_lemma(capsys):
    status, out, _ = run(capsys, "verify-lemma", "--p", "2", "--N", "16")
    assert status == 0
    assert out.splitlines()[0].startswith("# config:")
    assert "PASS pairs=15" in out


def test_verify_lemma_budget_guard(capsys):
    status, _, err = run(capsys, "verify-lemma", "--p", "7", "--N", "30")
    assert status == 2 and "SKIP budget exceeded" in err


def test_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("PADICRED_BUDGET", "100")
    status, _, err = run(capsys, "verify-lemma", "--p", "2", "--N", "10")
    assert status == 2 and "budget" in err


@pytest.mark.parametrize("argv", [
    ("verify-interp", "--interp", "gamma", "--p", "2", "--n", "8"),
    ("verify-interp", "--interp", "delta", "--p", "3", "--E", "t^2-3"),
    ("verify-interp", "--interp", "gamma", "--p", "3", "--n", "6", "--mode", "sampled"),
])
def test_verify_interp_passes(capsys, argv):
    status, out, _ = run(capsys, *argv)
    assert status == 0 and "PASS surjective" in out and "FAIL" not in out


def test_verify_interp_failure_exit_1(capsys):
    status, out, _ = run(capsys, "verify-interp", "--interp", "gamma", "--p", "2", "--n", "8",
                         "--variant", "literal")
    assert status == 1
    assert "FAIL rel divp" in out and "counterexample" in out


def test_translate_gamma(capsys):
    status, out, _ = run(capsys, "translate", "--interp", "gamma", "--p", "2", "--in", str(DATA / "phi.sexp"))
    assert status == 0
    body = [line for line in out.splitlines() if line.startswith("(")]
    assert body and body[0].startswith("(exists ((x R)) (and (P x)")
    assert out.rstrip().splitlines()[-1].startswith("class: ")


def test_translate_delta_ea(capsys, tmp_path):
    f = tmp_path / "phi.sexp"
    f.write_text("(exists ((x R)) (not (P x)))\n")
    status, out, _ = run(capsys, "translate", "--interp", "delta", "--p", "2", "--ea", "--in", str(f))
    assert status == 0 and "class: EA" in out


def test_pipeline(capsys):
    status, out, _ = run(capsys, "pipeline", "--p", "2", "--system", str(DATA / "ex1.dio"))
    assert status == 0 and out.rstrip().endswith("class: EA")


def test_encode(capsys):
    status, out, _ = run(capsys, "encode", "--p", "2", "--system", str(DATA / "ex1.dio"))
    assert status == 0
    assert "(exists ((x D)) (and (= (add x 1) 2) (not (= (times 6 x) inf))))" in out


def test_check_claim(capsys):
    status, out, _ = run(capsys, "check-claim", "--p", "2", "--N", "20", "--system", str(DATA / "ex1.dio"))
    assert status == 0 and "PASS forward" in out and "PASS backward" in out


def test_malformed_system(capsys):
    status, out, err = run(capsys, "encode", "--p", "2", "--system", str(DATA / "bad.dio"))
    assert status == 2 and "line 3" in err and out == ""


def test_parse_error_exit_2(capsys, tmp_path):
    f = tmp_path / "bad.sexp"
    f.write_text("(exists ((x R)) (= (mul x) x))")
    status, _, err = run(capsys, "parse", "--in", str(f))
    assert status == 2 and "takes 2 arguments" in err


def test_bad_eisenstein_exit_2(capsys):
    status, _, err = run(capsys, "verify-interp", "--interp", "delta", "--p", "2", "--E", "t^2-3")
    assert status == 2 and "not divisible by 2" in err


@pytest.mark.parametrize("structure,text,verdict", [
    ("imodel p=2 n=6", "(exists ((x D)) (= (add x x) 2))", "true"),
    ("ring p=2 n=3", "(exists ((x R)) (and (= (mul x x) zero) (not (= x zero))))", "true"),
    ("ring p=2 n=1", "(exists ((x R)) (and (= (mul x x) zero) (not (= x zero))))", "false"),
    ("p=2; E=[-2,0]; k=3", "(exists ((x K)) (= (mul x x) (add one one)))", "true"),
])
def test_eval(capsys, tmp_path, structure, text, verdict):
    f = tmp_path / "phi.sexp"
    f.write_text(text)
    status, out, _ = run(capsys, "eval", "--structure", structure, "--in", str(f))
    assert status == 0 and f"verdict: {verdict}" in out


def test_classify(capsys, tmp_path):
    f = tmp_path / "phi.sexp"
    f.write_text("(not (exists ((x D)) (= x one)))")
    status, out, _ = run(capsys, "classify", "--in", str(f))
    assert status == 0 and "(forall ((x D)) (not (= x one)))" in out and "class: A" in out


def test_report_file_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        run(capsys, "pipeline", "--p", "2", "--system", str(DATA / "mixed.dio"), "--out", str(path))
    assert a.read_bytes() == b.read_bytes() and a.stat().st_size > 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "padicred", "verify-lemma", "--p", "3", "--N", "10"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS pairs=6" in proc.stdout
