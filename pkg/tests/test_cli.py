import json

import numpy as np

from cvprivacy import state_to_json, symmetric_state, vacuum_state
from cvprivacy.cli import SweepSpec, main, render_sweep


def write_state(tmp_path, name, state):
    path = tmp_path / name
    path.write_text(state_to_json(state))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_vacuum(tmp_path, capsys):
    path = write_state(tmp_path, "vac.json", vacuum_state(2))
    code, out, _ = run_cli(capsys, "analyze", "--state", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["ppt"] is True
    assert doc["individual_secure"] is False
    assert doc["collective_secure"] is False


def test_analyze_individual_only_state(tmp_path, capsys):
    path = write_state(tmp_path, "s.json", symmetric_state(2.0, 1.2, 1.2))
    code, out, _ = run_cli(capsys, "analyze", "--state", path)
    doc = json.loads(out)
    assert code == 0
    assert doc["individual_secure"] is True
    assert doc["collective_secure"] is False


def test_analyze_collective_state(tmp_path, capsys):
    path = write_state(tmp_path, "s.json", symmetric_state(2.0, 1.3, 1.3))
    code, out, _ = run_cli(capsys, "analyze", "--state", path)
    doc = json.loads(out)
    assert code == 0
    assert doc["collective_secure"] is True


def test_analyze_schema_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"n_modes": 2, "cov": [[1, 0], [0, 1]], "disp": [0, 0, 0, 0]}')
    code, _, err = run_cli(capsys, "analyze", "--state", str(path))
    assert code == 1
    assert "cov" in err


def test_analyze_unphysical_exit_code(tmp_path, capsys):
    doc = {
        "n_modes": 2,
        "cov": (0.5 * np.eye(4)).tolist(),
        "disp": [0.0, 0.0, 0.0, 0.0],
    }
    path = tmp_path / "unphys.json"
    path.write_text(json.dumps(doc))
    code, _, err = run_cli(capsys, "analyze", "--state", str(path))
    assert code == 2
    assert "unphysical" in err.lower()


def test_sweep_columns_and_nesting(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--grid", "1:4:40,0:3.9:40")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "lambda,c,physical,nppt,individual,collective"
    assert len(lines) == 1 + 40 * 40
    for line in lines[1:]:
        _, _, phys, nppt, ind, coll = line.split(",")
        assert int(coll) <= int(ind) <= int(nppt) <= int(phys)


def test_sweep_boundaries_on_coarse_grid(capsys):
    # lambda grid 1:4:31 lands on 2.0 exactly
    code, out, _ = run_cli(capsys, "sweep", "--grid", "1:4:31,0:3.9:80")
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    rows = [r for r in rows if float(r[0]) == 2.0]
    assert len(rows) == 80
    cs = np.array([float(r[1]) for r in rows])
    phys = np.array([int(r[2]) for r in rows])
    nppt = np.array([int(r[3]) for r in rows])
    spacing = cs[1] - cs[0]
    c_phys = cs[phys == 1].max()
    assert abs(c_phys - np.sqrt(3.0)) <= spacing
    c_ent = cs[nppt == 1].min()
    assert abs(c_ent - 1.0) <= spacing


def test_sweep_x0_independent_bytes():
    spec_a = SweepSpec((1.0, 4.0, 30), (0.0, 3.9, 30), x0=1.0)
    spec_b = SweepSpec((1.0, 4.0, 30), (0.0, 3.9, 30), x0=5.0)
    assert render_sweep(spec_a) == render_sweep(spec_b)


def test_sweep_grid_parse_error(capsys):
    code, _, err = run_cli(capsys, "sweep", "--grid", "nonsense")
    assert code == 1
    assert "grid" in err


def test_simulate_deterministic_output(tmp_path, capsys):
    path = write_state(tmp_path, "s.json", symmetric_state(2.0, 1.2, 1.2))
    args = ("simulate", "--state", path, "--samples", "200000", "--seed", "7",
            "--delta", "0.05")
    code_a, out_a, _ = run_cli(capsys, *args)
    code_b, out_b, _ = run_cli(capsys, *args)
    assert code_a == code_b == 0
    assert out_a == out_b
    doc = json.loads(out_a)
    assert doc["seed"] == 7
    assert 0.0 <= doc["eps_b_hat"] <= 1.0


def test_simulate_insufficient_statistics_exit_code(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("CVPRIVACY_SEED", raising=False)
    path = write_state(tmp_path, "s.json", symmetric_state(2.0, 1.2, 1.2))
    code, _, err = run_cli(
        capsys, "simulate", "--state", path, "--x0", "9.0", "--delta", "0.001",
        "--samples", "10000",
    )
    assert code == 3
    assert "insufficient" in err.lower()


def test_seed_env_fallback(tmp_path, capsys, monkeypatch):
    path = write_state(tmp_path, "s.json", symmetric_state(2.0, 1.2, 1.2))
    monkeypatch.setenv("CVPRIVACY_SEED", "11")
    code, out, _ = run_cli(
        capsys, "simulate", "--state", path, "--samples", "100000", "--delta", "0.05"
    )
    assert code == 0
    assert json.loads(out)["seed"] == 11


def test_oracle_suite_passes(capsys):
    code, out, _ = run_cli(capsys, "oracle", "--trials", "5", "--cutoff", "30", "--seed", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["all_pass"] is True
    for check in doc["checks"]:
        assert check["pass"], check
