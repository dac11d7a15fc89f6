import json
import math
import subprocess
import sys

import pytest

from cvmonogamy.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_scenario_equal_loss_json(capsys):
    code, out, _ = run(capsys, "scenario", '{"r": 2, "eta0": 0.5, "etaB": 0.5}', "--json", "--closed-form")
    assert code == 0
    data = json.loads(out)
    half = 0.5 * (1 + math.exp(-4))
    assert data["report"]["D_BA"] == pytest.approx(half, abs=1e-10)
    assert data["report"]["D_BC"] == pytest.approx(half, abs=1e-10)
    assert data["family"] == "equal_loss"
    assert data["max_abs_discrepancy"] <= 1e-9


def test_scenario_examples(capsys):
    code, out, _ = run(capsys, "scenario", '{"r": 0, "eta0": 0.5}', "--json")
    report = json.loads(out)["report"]
    assert code == 0
    assert report["D_BA"] == pytest.approx(1.0) and report["D_BC"] == pytest.approx(1.0)
    assert report["S_coll"] == pytest.approx(1.0)
    code, out, _ = run(capsys, "scenario", '{"r": 1, "eta0": 0.5, "nB": 1, "nF": 1}', "--json")
    assert json.loads(out)["report"]["S_coll"] == pytest.approx(3 / math.cosh(2), rel=1e-10)


def test_scenario_text_and_file_input(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text('{"r": 1, "eta0": 0.3}')
    code, out, _ = run(capsys, "scenario", str(path), "--closed-form")
    assert code == 0
    assert "closed form (ideal)" in out
    assert out.splitlines()[0].startswith("D_BA")


def test_scenario_without_closed_form_is_input_error(capsys):
    code, _, err = run(capsys, "scenario", '{"r": 1, "eta0": 0.5, "etaB": 0.5, "etaC": 0.5}', "--closed-form")
    assert code == 2
    assert "closed form" in err


@pytest.mark.parametrize(
    "argv, code",
    [
        (["scenario", "{not json"], 2),
        (["scenario", '{"r": 1}'], 2),
        (["scenario", '{"r": 1, "eta0": 0.5, "bogus": 1}'], 2),
        (["scenario", '{"r": 1, "eta0": 1.5}'], 3),
        (["scenario", '{"r": 1, "eta0": 0.5, "nB": -1}'], 3),
        (["sweep", "--preset", "fig99"], 2),
        (["sweep"], 2),
        (["fuzz", "0"], 2),
        (["mc", '{"r": 1, "eta0": 0.5}', "10"], 2),
        (["frobnicate"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_unwritable_output_is_io_error(capsys, tmp_path):
    target = tmp_path / "missing-dir" / "out.csv"
    assert run(capsys, "sweep", "--preset", "fig3a", "--out", str(target))[0] == 4


def test_sweep_preset_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "sweep", "--preset", "fig3b", "--out", str(a))[0] == 0
    assert run(capsys, "sweep", "--preset", "fig3", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 102


def test_sweep_custom_spec(capsys):
    spec = {"scenario": "loss_B", "fixed": {"r": 1.0, "eta0": 0.5}, "sweep_var": "etaB",
            "range": [0.1, 0.9, 5], "outputs": ["D_BA", "residuals"]}
    code, out, _ = run(capsys, "sweep", "--spec", json.dumps(spec))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "etaB,D_BA,r1,r2,r3_product,r3_sum,r4"
    assert len(lines) == 6


def test_fuzz_positional_and_flags_agree(capsys):
    code, out1, _ = run(capsys, "fuzz", "30", "4", "3")
    assert code == 0
    code, out2, _ = run(capsys, "fuzz", "--trials", "30", "--seed", "4", "--depth", "3")
    assert out1 == out2
    data = json.loads(out1)
    assert data["trials"] == 30 and data["ok"]
    assert set(data["min_residuals"]) == {"r1", "r2", "r3_product", "r3_sum", "r4"}


def test_mc_table(capsys):
    code, out, _ = run(capsys, "mc", '{"r": 1, "eta0": 0.5}', "200000", "3", "--json")
    assert code == 0
    rows = json.loads(out)["rows"]
    names = [r["quantity"] for r in rows]
    assert "Var_inf(X_B|AC)" in names and "S_B|AC" in names
    assert all(r["ok"] for r in rows)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cvmonogamy", "scenario", '{"r": 0.5, "eta0": 0.5}'],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "S_coll" in proc.stdout
