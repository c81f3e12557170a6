"""CLI behavior: flag plumbing, config files, output formats, exit codes."""

import json
import subprocess
import sys

from qudisc.cli import main
from qudisc.experiments import CSV_COLUMNS


def run_cli(*argv):
    return main(list(argv))


def _strip_wall_time(csv_text):
    lines = [line.split(",") for line in csv_text.strip().split("\n")]
    drop = lines[0].index("wall_time_s")
    return ["\t".join(cells[:drop] + cells[drop + 1 :]) for cells in lines]


def test_theory_text_output(capsys):
    assert run_cli("theory", "--example", "1", "--n", "6") == 0
    out = capsys.readouterr().out
    assert "theta = 0.523598775598298" in out
    assert "min_copies = 6" in out
    assert "p_success_bound = 0.62940952255126" in out


def test_theory_json_output(capsys):
    assert run_cli("theory", "--example", "2", "--n", "4", "--format", "json") == 0
    body = json.loads(capsys.readouterr().out)
    assert body["min_copies"] == 4


def test_theory_requires_a_pair(capsys):
    assert run_cli("theory") == 1
    assert "error" in capsys.readouterr().err


def test_build_emits_qasm(capsys):
    code = run_cli("build", "--example", "2", "--n", "4", "--w", "2", "--d", "2")
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("OPENQASM 3.0;")
    assert "measure" in out


def test_build_json_format(capsys):
    code = run_cli(
        "build", "--example", "1", "--n", "4", "--w", "2", "--d", "2",
        "--format", "json",
    )
    assert code == 0
    body = json.loads(capsys.readouterr().out)
    assert body["n_qubits"] == 2
    assert body["rule"] == "OutcomeSets"


def test_run_with_flags_writes_csv(tmp_path, capsys):
    out_file = tmp_path / "rows.csv"
    code = run_cli(
        "run", "--example", "1", "--n", "4", "--w", "2", "--d", "2",
        "--shots", "100", "--seed", "3", "--out", str(out_file),
    )
    assert code == 0
    lines = out_file.read_text().strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 2
    assert lines[1].startswith("2,2,short,1.0,1.0,0,1.0,100,3,")


def test_run_uses_config_file(tmp_path, capsys):
    config = {
        "example": "example1",
        "n_copies": 4,
        "shots": 60,
        "seed": 2,
        "noise": {"p1": 0.0, "p2": 0.0, "p_read": 0.0},
        "factorizations": [[4, 1]],
    }
    path = tmp_path / "c.json"
    path.write_text(json.dumps(config))
    assert run_cli("run", "--config", str(path)) == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert len(lines) == 2
    assert lines[1].startswith("4,1,short,1.0,")


def test_flags_override_config(tmp_path, capsys):
    config = {"example": "example1", "n_copies": 4, "shots": 60, "seed": 2}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(config))
    assert run_cli("run", "--config", str(path), "--shots", "25") == 0
    out = capsys.readouterr().out
    assert ",25," in out.strip().split("\n")[1]


def test_missing_config_file_is_exit_1(capsys):
    code = run_cli("run", "--config", "/no/such/config.json")
    assert code == 1
    err = capsys.readouterr().err
    assert "/no/such/config.json" in err


def test_invalid_config_json_is_exit_1(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert run_cli("run", "--config", str(path)) == 1
    assert str(path) in capsys.readouterr().err


def test_bad_noise_flag_is_exit_1(capsys):
    code = run_cli("run", "--example", "1", "--n", "4", "--noise", "0.1,0.2")
    assert code == 1
    assert "--noise" in capsys.readouterr().err


def test_service_rejection_is_exit_1(capsys):
    code = run_cli("run", "--example", "1", "--n", "4", "--w", "3", "--d", "2")
    assert code == 1
    assert "400" in capsys.readouterr().err


def test_unwritable_output_is_exit_2(capsys):
    code = run_cli(
        "theory", "--example", "1", "--n", "2",
        "--out", "/no/such/dir/report.txt",
    )
    assert code == 2


def test_unknown_flag_is_exit_1(capsys):
    assert run_cli("run", "--bogus") == 1


def test_sweep_noiseless_json(capsys):
    code = run_cli(
        "sweep", "--example", "2", "--n", "8", "--shots", "50",
        "--noise", "0,0,0", "--seed", "7", "--format", "json",
    )
    assert code == 0
    body = json.loads(capsys.readouterr().out)
    assert [(r["w"], r["d"]) for r in body["rows"]] == [(1, 8), (2, 4), (4, 2), (8, 1)]
    assert all(r["p_succ_raw"] == 1.0 for r in body["rows"])


def test_sweep_csv_deterministic_modulo_wall_time(capsys):
    args = (
        "sweep", "--example", "1", "--n", "4", "--shots", "150",
        "--seed", "11", "--noise", "3e-4,8e-3,1.5e-2",
    )
    assert run_cli(*args) == 0
    first = capsys.readouterr().out
    assert run_cli(*args) == 0
    second = capsys.readouterr().out
    assert first != ""
    assert _strip_wall_time(first) == _strip_wall_time(second)


def test_suboptimal_csv(capsys):
    code = run_cli(
        "suboptimal", "--n", "8", "--w", "2", "--d", "4", "--shots", "500",
        "--seed", "5",
    )
    assert code == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0].startswith("n_copies,width,depth,p_succ,")
    assert lines[1].startswith("8,2,4,")


def test_suboptimal_requires_shape(capsys):
    assert run_cli("suboptimal", "--n", "8") == 1
    err = capsys.readouterr().err
    assert "--w" in err and "--d" in err


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qudisc.cli", "theory", "--example", "1", "--n", "2"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert "theta" in proc.stdout
