import json
import os
from pathlib import Path

import pytest

import mechquot

FIXTURES = Path(os.environ.get("MECHQUOT_FIXTURES", Path(__file__).resolve().parents[2] / "fixtures"))


def test_commands_listed():
    assert "check-quotient" in mechquot.commands()


def test_worked_example_not_accessible():
    code, report = mechquot.run("check-accessibility", FIXTURES / "worked_example.json")
    assert code == 1
    assert report["accessibility"]["sym_generic_rank"] == 2


def test_quotient_and_witness():
    code, _ = mechquot.run("check-quotient", FIXTURES / "worked_example.json", distribution="D3")
    assert code == 0
    code, report = mechquot.run("check-quotient", FIXTURES / "gamma222_x1.json")
    assert code == 1
    assert [w["condition"] for w in report["direct"]["witnesses"]] == ["curvature"]


def test_build_quotient(tmp_path):
    out = tmp_path / "q.json"
    code, report = mechquot.run("build-quotient", FIXTURES / "worked_example.json", distribution="D3", out=str(out))
    assert code == 0
    emitted = json.loads(out.read_text())
    assert emitted["chart"]["velocity"] == ["y1", "y2"]
    assert mechquot.equal(report["velocity_drift"]["y2"], "y1*y2 + y1^2 - y2^2", ["x1", "x2", "y1", "y2"])


def test_commutation_and_pole():
    r = mechquot.run_command("check-commutation", str(FIXTURES / "worked_example.json"), scenario="tau")
    assert r.exit_code == 0
    assert json.loads(r.machine)["residual"] <= 1e-6
    code, report = mechquot.run("simulate", FIXTURES / "pole.json")
    assert code == 2
    assert report["error"]["kind"] == "integration"


def test_determinism():
    a = mechquot.run_command("verify-identities", str(FIXTURES / "worked_example.json"), seed=42)
    b = mechquot.run_command("verify-identities", str(FIXTURES / "worked_example.json"), seed=42)
    assert a.exit_code == 0
    assert a.text == b.text and a.machine == b.machine


def test_expressions():
    assert mechquot.canonical("(x^2 - 1)/(x - 1) - x", ["x"]) == "1"
    with pytest.raises(mechquot.InputError):
        mechquot.canonical("x + z", ["x"])
