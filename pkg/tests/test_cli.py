import json
import subprocess
import sys
from pathlib import Path

import pytest

from kzlab.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main

ROOT = Path(__file__).resolve().parents[1]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_selberg_example(capsys):
    code, out, err = run(["verify-selberg", "--m", "1", "--l", "2.3", "--nu", "1.7", "--kappa", "3.14159"], capsys)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["passed"] and doc["reports"][0]["max_residual"] <= 1e-6
    assert "PASS" in err


def test_2f1_example(capsys):
    code, out, _ = run(["verify-2f1", "--alpha", "0.7", "--beta", "1.1", "--gamma", "1.9", "--x=-0.4"], capsys)
    assert code == EXIT_OK
    rep = json.loads(out)["reports"][0]
    assert rep["max_residual"] <= 1e-8


def test_suite_twice_is_byte_identical(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"run{i}.json"
        code = main(["suite", "--config", str(ROOT / "default.json"), "--seed", "42", "--samples", "3",
                     "--out", str(path)])
        assert code == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_seed_changes_output(tmp_path):
    texts = []
    for seed in ("1", "2"):
        path = tmp_path / f"s{seed}.json"
        main(["verify-flatness", "--seed", seed, "--samples", "2", "--out", str(path)])
        texts.append(path.read_text())
    assert texts[0] != texts[1]


def test_flags_override_config(capsys):
    cfg = json.dumps({"samples": 5, "seed": 3})
    code, out, _ = run(["verify-br", "--config", cfg, "--samples", "2"], capsys)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["config"]["samples"] == 2 and doc["config"]["seed"] == 3
    assert {r["identity"] for r in doc["reports"]} == {"duality:BR", "duality:BR:control"}


def test_single_frame_flags(capsys):
    code, out, _ = run(["verify-duality", "--k", "2", "--n", "2", "--l", "1,1", "--m", "1,1",
                        "--samples", "2", "--family", "nD"], capsys)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["config"]["frames"] == [{"k": 2, "n": 2, "l": ["1", "1"], "m": ["1", "1"]}]
    assert {r["identity"] for r in doc["reports"]} == {"duality:nD", "duality:nD:control"}


@pytest.mark.parametrize("argv", [
    ["verify-flatness", "--bogus"],
    ["no-such-command"],
    ["verify-flatness", "--k", "2"],
    ["verify-flatness", "--config", '{"samples": -1}'],
    ["verify-flatness", "--config", '{"unknown": 1}'],
    ["verify-flatness", "--config", "/nonexistent/config.json"],
    ["verify-selberg", "--m", "5"],
    ["verify-2f1", "--x", "2.0"],
    ["integrate", "--kind", "Ut", "--residuals"],
])
def test_bad_flags_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == EXIT_USAGE
    assert "usage" in err


def test_failing_identity_exits_1(capsys):
    code, out, err = run(["verify-2f1", "--tolerance", "1e-30"], capsys)
    assert code == EXIT_FAIL
    assert json.loads(out)["passed"] is False
    assert "FAIL" in err


def test_integrate_with_residuals(capsys):
    code, out, _ = run(["integrate", "--residuals"], capsys)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert set(doc["solution"]) >= {"kind", "d", "values"}
    assert doc["reports"][0]["max_residual"] <= 1e-4


def test_rmatrix_blocks(capsys):
    code, out, _ = run(["rmatrix", "--k", "2", "--l", "1", "--m", "1", "--t", "0.7+0.3j"], capsys)
    assert code == EXIT_OK
    blocks = json.loads(out)["rmatrix"]["blocks"]
    assert sum(len(b["basis"]) for b in blocks) == 4


def test_dualities_default(capsys):
    for cmd in ("verify-dualhint", "verify-dualqhint"):
        code, out, _ = run([cmd], capsys)
        assert code == EXIT_OK
        assert json.loads(out)["reports"][0]["max_residual"] <= 1e-6


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kzlab.cli", "verify-2f1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"]
