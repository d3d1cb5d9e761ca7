import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from qchemsim.cli import EXIT_CAP, EXIT_INVALID, EXIT_OK, main
from qchemsim.errors import DomainError
from qchemsim.experiments import ConfigError, load_config, read_csv, run, write_csv
from qchemsim.fold import FOLD_PUBO, write_pubo

DATA = Path(__file__).parent / "data"


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def run_cli(tmp_path, pipeline, config_text, *extra):
    cfg = write(tmp_path, "run.cfg", config_text)
    out = tmp_path / "out.csv"
    code = main([pipeline, "--config", str(cfg), "--out", str(out), *extra])
    return code, out


# ---------------------------------------------------------------- config validation


@pytest.mark.parametrize("pipeline, text", [
    ("pea", "[pea]\nbits = 20\n"),                                  # integrals missing
    ("pea", "[pea]\nintegrals = a.txt\nbits = 0\n"),
    ("pea", "[pea]\nintegrals = a.txt\nmethod = magic\n"),
    ("dynamics", "[dynamics]\nqubits = 13\n"),
    ("dynamics", "[dynamics]\ndt = 0\n"),
    ("fold", "[fold]\nt_runs = 1, -2\n"),
    ("fold", "[fold]\ncolour = blue\n"),
    ("cets", "[cets]\nenergies = 0, 1\nbeta = -1\n"),
    ("cets", "[cets]\nenergies = 0, x\nbeta = 1\n"),
    ("qubo", "[qubo]\nproblem = p.txt\nvariables = trits\n"),
    ("fold", "seed = abc\n"),
    ("fold", "this is not a config\n"),
])
def test_invalid_config_exits_2(tmp_path, capsys, pipeline, text):
    code, out = run_cli(tmp_path, pipeline, text)
    assert code == EXIT_INVALID
    assert not out.exists()
    assert capsys.readouterr().err.startswith("error:")


def test_validation_happens_before_compute():
    with pytest.raises(ConfigError):
        load_config("pea", "[pea]\nintegrals = does-not-matter.txt\nshots_per_bit = 100\n")


def test_missing_config_file_exits_2(tmp_path):
    assert main(["fold", "--config", str(tmp_path / "absent.cfg")]) == EXIT_INVALID


def test_missing_input_file_exits_2(tmp_path):
    code, _ = run_cli(tmp_path, "qubo", "[qubo]\nproblem = absent.txt\n")
    assert code == EXIT_INVALID


def test_bad_input_file_exits_2(tmp_path):
    write(tmp_path, "bad.txt", "M 2\n1e 1 3 0.5\n")
    code, _ = run_cli(tmp_path, "pea", "[pea]\nintegrals = bad.txt\n")
    assert code == EXIT_INVALID


def test_grid_cap_exits_3(tmp_path, capsys):
    code, out = run_cli(tmp_path, "dynamics", "[dynamics]\nqubits = 9\ndims = 3\nlo = -30\nhi = 30\n")
    assert code == EXIT_CAP and not out.exists()
    assert "cap" in capsys.readouterr().err


def test_enumeration_cap_exits_3(tmp_path):
    write(tmp_path, "big.txt", "vars 25\nc 1 2 1.0\n")
    code, _ = run_cli(tmp_path, "qubo", "[qubo]\nproblem = big.txt\nvariables = spin\n")
    assert code == EXIT_CAP


def test_cli_seed_overrides_config():
    cfg = load_config("fold", "seed = 3\n", seed=9)
    assert cfg.seed == 9
    assert load_config("fold", "seed = 3\n").seed == 3


def test_section_overrides_top_level():
    cfg = load_config("fold", "dt = 0.2\n[fold]\ndt = 0.05\n")
    assert cfg["dt"] == 0.05


# ---------------------------------------------------------------- pea


def test_zero_hamiltonian_gives_zero_energy(tmp_path):
    write(tmp_path, "zero.txt", "M 2\n")
    code, out = run_cli(tmp_path, "pea", "[pea]\nintegrals = zero.txt\nbits = 12\nelectrons = 1\n")
    assert code == EXIT_OK
    (row,) = read_csv(out.read_text())
    assert float(row["energy_estimate"]) == 0.0 and float(row["exact_energy"]) == 0.0


def test_sweep_preserves_instances_and_labels(tmp_path):
    h2 = (DATA / "h2_r1.4.txt").read_text()
    names = []
    for i in range(5):
        write(tmp_path, f"h{i}.txt", h2)
        names.append(f"h{i}.txt")
    labels = ["a", "b", "c", "d", "e"]
    text = f"[pea]\nintegrals = {', '.join(names)}\nlabels = {', '.join(labels)}\nbits = 10\nelectrons = 2\n"
    code, out = run_cli(tmp_path, "pea", text)
    assert code == EXIT_OK
    rows = read_csv(out.read_text())
    assert [r["label"] for r in rows] == labels
    for r in rows:
        assert abs(float(r["energy_estimate"]) - float(r["exact_energy"])) < 0.01
        assert int(r["bits"]) == 10
    report = Path(str(out) + ".report.txt").read_text()
    assert "instances 5" in report


def test_labels_must_match_instances(tmp_path):
    write(tmp_path, "z.txt", "M 1\n")
    code, _ = run_cli(tmp_path, "pea", "[pea]\nintegrals = z.txt\nlabels = a, b\n")
    assert code == EXIT_INVALID


# ---------------------------------------------------------------- fold and qubo


def test_fold_outputs_and_seed_independence(tmp_path):
    code, out = run_cli(tmp_path, "fold", "[fold]\nt_runs = 1, 10, 100\n", "--seed", "1")
    assert code == EXIT_OK
    first = {s: Path(str(out) + s).read_text() for s in ("", ".sweep.csv", ".report.txt")}
    main(["fold", "--config", str(tmp_path / "run.cfg"), "--out", str(out), "--seed", "2"])
    second = {s: Path(str(out) + s).read_text() for s in first}
    assert first == second

    landscape = read_csv(first[""])
    assert len(landscape) == 16
    assert landscape[0]["assignment"] == "1110" and float(landscape[0]["energy"]) == -1.0
    sweep = read_csv(first[".sweep.csv"])
    assert [float(r["t_run"]) for r in sweep] == [1.0, 10.0, 100.0]
    assert all(0.0 <= float(r["success_probability"]) <= 1.0 for r in sweep)
    assert "unique_minimum true" in first[".report.txt"].lower()


def test_fold_sampled_success_depends_on_seed(tmp_path):
    code, out = run_cli(tmp_path, "fold", "[fold]\nt_runs = 10\nshots = 500\n", "--seed", "5")
    assert code == EXIT_OK
    row = read_csv(Path(str(out) + ".sweep.csv").read_text())[0]
    assert abs(float(row["sampled_success"]) - float(row["success_probability"])) < 0.1


def test_qubo_binary_problem(tmp_path):
    write(tmp_path, "fold.txt", write_pubo(FOLD_PUBO))
    code, out = run_cli(tmp_path, "qubo", "[qubo]\nproblem = fold.txt\nt_runs = 1, 10\n")
    assert code == EXIT_OK
    rows = read_csv(out.read_text())
    assert rows[0]["assignment"] == "1110"


def test_qubo_spin_problem_rescaled(tmp_path):
    write(tmp_path, "spin.txt", "vars 2\nc 1 -3\nc 1 2 2\n")
    code, out = run_cli(tmp_path, "qubo", "[qubo]\nproblem = spin.txt\nvariables = spin\nt_runs = 5\n")
    assert code == EXIT_OK
    report = Path(str(out) + ".report.txt").read_text()
    assert "ancillas 0" in report and "min_energy -5\n" in report
    rows = read_csv(out.read_text())
    # energies are reported in the file's units, not the rescaled ones
    assert [(r["assignment"], float(r["energy"]), r["global_minimum"]) for r in rows[:2]] == [
        ("01", -5.0, "1"), ("00", -1.0, "0")]


def test_qubo_spin_rejects_cubic_terms(tmp_path):
    write(tmp_path, "spin.txt", "vars 3\nc 1 2 3 1.0\n")
    code, _ = run_cli(tmp_path, "qubo", "[qubo]\nproblem = spin.txt\nvariables = spin\n")
    assert code == EXIT_INVALID


# ---------------------------------------------------------------- cets and dynamics


def test_cets_pipeline(tmp_path):
    code, out = run_cli(tmp_path, "cets", "[cets]\nenergies = 0, 1, 2\nbeta = 1\n")
    assert code == EXIT_OK
    rows = read_csv(out.read_text())
    w = np.exp(-np.arange(3.0))
    w /= w.sum()
    for r, expected in zip(rows, w):
        assert abs(float(r["gibbs_weight"]) - expected) < 1e-12
        assert abs(float(r["reduced_diagonal"]) - expected) < 1e-12


def test_dynamics_pipeline(tmp_path):
    text = "[dynamics]\nqubits = 7\nlo = -10\nhi = 10\npotential = harmonic\nt = 0.5\ndt = 0.05\nrecord_every = 5\n"
    code, out = run_cli(tmp_path, "dynamics", text)
    assert code == EXIT_OK
    rows = read_csv(out.read_text())
    assert [int(r["step"]) for r in rows] == [0, 5, 10]
    assert all(abs(float(r["norm"]) - 1) < 1e-10 for r in rows)


def test_stdout_when_no_out(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", "[fold]\nt_runs = 1\n")
    assert main(["fold", "--config", str(cfg)]) == EXIT_OK
    text = capsys.readouterr().out
    assert text.startswith("assignment,") and "# sweep.csv" in text and "# report.txt" in text


# ---------------------------------------------------------------- CSV format


def test_csv_round_trip_is_bit_exact():
    rng = np.random.default_rng(0)
    values = list(rng.normal(size=20)) + [1e-300, -0.0, 1 / 3, 2.0**60]
    text = write_csv(["value"], [[float(v)] for v in values])
    back = [float(r["value"]) for r in read_csv(text)]
    assert [v.hex() for v in back] == [float(v).hex() for v in values]


def test_outputs_use_lf_line_endings(tmp_path):
    code, out = run_cli(tmp_path, "cets", "[cets]\nenergies = 0, 1\nbeta = 0.5\n")
    assert code == EXIT_OK
    raw = out.read_bytes()
    assert b"\r\n" not in raw and raw.endswith(b"\n")


def test_run_returns_outputs_without_writing():
    cfg = load_config("cets", "energies = 0, 1\nbeta = 2\n")
    outputs = run(cfg)
    assert set(outputs) == {""}


def test_module_entry_point(tmp_path):
    cfg = write(tmp_path, "c.cfg", "[cets]\nenergies = 0, 1\nbeta = 1\n")
    ok = subprocess.run([sys.executable, "-m", "qchemsim", "cets", "--config", str(cfg)],
                        capture_output=True, text=True)
    assert ok.returncode == EXIT_OK and ok.stdout.startswith("level,")
    bad = subprocess.run([sys.executable, "-m", "qchemsim", "cets"], capture_output=True, text=True)
    assert bad.returncode == EXIT_INVALID and "required" in bad.stderr


def test_config_error_is_domain_error():
    assert issubclass(ConfigError, DomainError)
