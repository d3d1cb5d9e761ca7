"""Batch pipelines behind the command line: config parsing, dispatch, CSV output."""

from __future__ import annotations

import configparser
import csv
import io
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import fold as fold_mod
from . import grid as grid_mod
from .errors import DomainError
from .fermion import assemble_hamiltonian, number_operator
from .integrals import parse_integrals
from .pauli import dense_matrix
from .spectrum import (
    CetsSpec,
    EnergyWindow,
    ExactUnitary,
    TrotterUnitary,
    iterative_pea,
    phase_estimation,
    prepare_cets,
    prepare_fock,
    reduced_density_matrix,
)
from .statevector import StateVector

log = logging.getLogger(__name__)

PIPELINES = ("pea", "dynamics", "fold", "qubo", "cets")


class ConfigError(DomainError):
    """Missing or out-of-range configuration parameter."""


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def write_csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def read_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


# --------------------------------------------------------------------------
# configuration


def _floats(s: str) -> list[float]:
    return [float(x) for x in s.replace(";", ",").split(",") if x.strip()]


def _strings(s: str) -> list[str]:
    return [x.strip() for x in s.split(",") if x.strip()]


@dataclass(frozen=True)
class Param:
    parse: Callable[[str], Any]
    default: Any = None
    check: Callable[[Any], bool] = lambda v: True
    doc: str = ""

    @property
    def required(self) -> bool:
        return self.default is None


def _positive(v) -> bool:
    return v > 0


def _all_positive(vs) -> bool:
    return len(vs) > 0 and all(v > 0 for v in vs)


SCHEMAS: dict[str, dict[str, Param]] = {
    "pea": {
        "integrals": Param(_strings, None, lambda v: len(v) > 0, "integral files, comma separated"),
        "labels": Param(_strings, [], doc="one label per file (default: file stem)"),
        "bits": Param(int, 20, lambda v: 1 <= v <= 40, "phase bits to extract"),
        "method": Param(str, "iterative", lambda v: v in ("iterative", "full")),
        "unitary": Param(str, "exact", lambda v: v in ("exact", "trotter")),
        "trotter_steps": Param(int, 100, _positive),
        "order": Param(int, 2, lambda v: v in (1, 2)),
        "electrons": Param(int, -1, lambda v: v >= -1, "electron count; -1 means half the modes"),
        "input": Param(str, "fock", lambda v: v in ("fock", "ground")),
        "collapse_bits": Param(int, 8, lambda v: 1 <= v <= 14),
        "restarts": Param(int, 5, _positive),
        "shots_per_bit": Param(int, 101, lambda v: v > 0 and v % 2 == 1),
        "shots": Param(int, 1000, _positive, "shots for method=full"),
    },
    "dynamics": {
        "qubits": Param(int, 8, lambda v: 1 <= v <= 12),
        "lo": Param(float, -20.0),
        "hi": Param(float, 20.0),
        "dims": Param(int, 1, lambda v: 1 <= v <= 3),
        "masses": Param(_floats, [1.0], _all_positive),
        "charges": Param(_floats, []),
        "center": Param(_floats, [0.0]),
        "width": Param(_floats, [1.0], _all_positive),
        "momentum": Param(_floats, [0.0]),
        "potential": Param(str, "free", lambda v: v in ("free", "harmonic", "coulomb")),
        "omega": Param(float, 1.0, _positive),
        "softening": Param(float, -1.0, doc="negative means half the grid spacing"),
        "t": Param(float, 1.0, lambda v: v >= 0),
        "dt": Param(float, 0.01, _positive),
        "order": Param(int, 2, lambda v: v in (1, 2)),
        "record_every": Param(int, 1, lambda v: v >= 1),
    },
    "fold": {
        "t_runs": Param(_floats, [1.0, 10.0, 100.0, 1000.0], _all_positive),
        "dt": Param(float, 0.1, _positive),
        "shots": Param(int, 0, lambda v: v >= 0),
    },
    "qubo": {
        "problem": Param(str, None, doc="path to a QUBO/PUBO text file"),
        "variables": Param(str, "binary", lambda v: v in ("binary", "spin")),
        "t_runs": Param(_floats, [1.0, 10.0, 100.0], _all_positive),
        "dt": Param(float, 0.1, _positive),
        "shots": Param(int, 0, lambda v: v >= 0),
    },
    "cets": {
        "energies": Param(_floats, None, lambda v: len(v) > 0),
        "beta": Param(float, None, lambda v: v >= 0),
    },
}


@dataclass
class ExperimentConfig:
    pipeline: str
    seed: int = 0
    params: dict[str, Any] = field(default_factory=dict)
    out: Path | None = None
    base_dir: Path = Path(".")

    def __getitem__(self, key: str):
        return self.params[key]


def validate(pipeline: str, raw: dict[str, str]) -> dict[str, Any]:
    """Parse and range-check every parameter before anything runs."""
    if pipeline not in SCHEMAS:
        raise ConfigError(f"unknown pipeline {pipeline!r}")
    schema = SCHEMAS[pipeline]
    unknown = set(raw) - set(schema) - {"seed", "out"}
    if unknown:
        raise ConfigError(f"unknown parameter(s) for {pipeline}: {', '.join(sorted(unknown))}")
    out: dict[str, Any] = {}
    for name, p in schema.items():
        if name in raw:
            try:
                value = p.parse(raw[name])
            except ValueError as exc:
                raise ConfigError(f"{pipeline}.{name}: cannot parse {raw[name]!r} ({exc})") from None
        elif p.required:
            raise ConfigError(f"{pipeline}.{name} is required")
        else:
            value = p.default
        if not p.check(value):
            raise ConfigError(f"{pipeline}.{name} = {value!r} is out of range")
        out[name] = value
    return out


def load_config(pipeline: str, text: str = "", base_dir: Path | str = ".",
                seed: int | None = None, out: str | Path | None = None) -> ExperimentConfig:
    """Read ``key = value`` lines; top-level keys apply to every section, ``[pipeline]`` keys override."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string("[DEFAULT]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    raw = dict(cp[pipeline]) if cp.has_section(pipeline) else dict(cp.defaults())
    try:
        cfg_seed = int(raw.pop("seed", "0"))
    except ValueError:
        raise ConfigError("seed must be an integer") from None
    cfg_out = raw.pop("out", None)
    params = validate(pipeline, raw)
    base = Path(base_dir)
    out_path = Path(out) if out is not None else (base / cfg_out if cfg_out else None)
    return ExperimentConfig(pipeline, cfg_seed if seed is None else int(seed), params, out_path, base)


# --------------------------------------------------------------------------
# pipelines; each returns {file suffix: text} where "" is the main output


def _sector_ground(h_dense: np.ndarray, n_modes: int, electrons: int) -> tuple[float, np.ndarray]:
    idx = np.arange(2**n_modes)
    sector = idx[np.bitwise_count(idx) == electrons]
    vals, vecs = np.linalg.eigh(h_dense[np.ix_(sector, sector)])
    g = np.zeros(2**n_modes, dtype=complex)
    g[sector] = vecs[:, 0]
    return float(vals[0]), g


def pea_instance(ham_text: str, params: dict[str, Any], rng: np.random.Generator) -> dict[str, Any]:
    """Estimate the ground energy of one integrals file and compare with the dense oracle."""
    ham = parse_integrals(ham_text)
    h = assemble_hamiltonian(ham)
    m = ham.n_modes
    electrons = params["electrons"] if params["electrons"] >= 0 else m // 2
    if electrons > m:
        raise ConfigError(f"{electrons} electrons do not fit in {m} modes")
    exact, ground = _sector_ground(dense_matrix(h), m, electrons)
    window = EnergyWindow.from_pauli_sum(h)
    if params["unitary"] == "exact":
        u = ExactUnitary(h, window)
    else:
        u = TrotterUnitary(h, window, params["trotter_steps"], params["order"])
    fock = prepare_fock("1" * electrons + "0" * (m - electrons))
    ground_weight = fock.fidelity(StateVector(m, ground))
    if ground_weight < 0.5:
        log.warning("reference state has weight %.3f < 0.5 on the ground state", ground_weight)
    bits = params["bits"]

    if params["method"] == "full":
        res = phase_estimation(u, StateVector(m, ground) if params["input"] == "ground" else fock,
                               bits, window, shots=params["shots"], rng=rng)
        peaks = res.peaks(min_weight=0.05)
        low = min(v for v, _ in peaks) if peaks else res.most_likely()
        estimate = float(res.energy(low))
    elif params["input"] == "ground":
        estimate = iterative_pea(u, StateVector(m, ground), bits, rng, params["shots_per_bit"]).energy
    else:
        # collapse the reference onto an eigenvector with a coarse readout, refine iteratively,
        # keep the lowest energy over restarts
        estimate = math.inf
        for _ in range(params["restarts"]):
            coarse = phase_estimation(u, fock, params["collapse_bits"], window, shots=1, rng=rng)
            fine = iterative_pea(u, coarse.post_state, bits, rng, params["shots_per_bit"])
            estimate = min(estimate, fine.energy)
    return {"energy": estimate, "exact": exact, "bits": bits, "window": window.width,
            "ground_weight": ground_weight}


def run_pea_sweep(cfg: ExperimentConfig) -> dict[str, str]:
    p = cfg.params
    files = [cfg.base_dir / f for f in p["integrals"]]
    labels = p["labels"] or [f.stem for f in files]
    if len(labels) != len(files):
        raise ConfigError("labels and integrals lists differ in length")
    rng = np.random.default_rng(cfg.seed)
    rows = []
    worst = 0.0
    for label, f in zip(labels, files):
        try:
            text = f.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {f}: {exc}") from None
        r = pea_instance(text, p, rng)
        rows.append([label, r["energy"], r["exact"], r["bits"]])
        worst = max(worst, abs(r["energy"] - r["exact"]))
    report = f"instances {len(rows)}\nmax_abs_deviation {fmt(worst)}\n"
    return {"": write_csv(["label", "energy_estimate", "exact_energy", "bits"], rows), ".report.txt": report}


def _anneal_sweep(qubo: fold_mod.QuboProblem, t_runs, dt, shots, seed) -> list[list[Any]]:
    rng = np.random.default_rng(seed)
    rows = []
    for t in t_runs:
        res = fold_mod.anneal(qubo, fold_mod.AnnealSchedule(t), dt, rng=rng, shots=shots)
        row = [float(t), res.success_probability, res.n_steps]
        if shots:
            row.append(float(np.isin(res.samples, res.minimizers).mean()))
        rows.append(row)
    return rows


def _sweep_header(shots: int) -> list[str]:
    return ["t_run", "success_probability", "n_steps"] + (["sampled_success"] if shots else [])


def _landscape_csv(landscape: fold_mod.Landscape) -> str:
    minima = {"".join(map(str, a)) for a in landscape.argmin()}
    rows = [[bits, e, rank, int(bits in minima)] for bits, e, rank in landscape.rows()]
    return write_csv(["assignment", "energy", "rank", "global_minimum"], rows)


def run_fold(cfg: ExperimentConfig) -> dict[str, str]:
    p = cfg.params
    landscape = fold_mod.brute_force_minimize(fold_mod.FOLD_PUBO)
    red = fold_mod.reduce_to_qubo(fold_mod.FOLD_PUBO)
    reduced = fold_mod.brute_force_minimize(red.qubo)
    projected = sorted({a[: red.n_original] for a in reduced.argmin()})
    unique = len(landscape.argmin()) == 1
    sound = projected == sorted(landscape.argmin()) and math.isclose(
        red.qubo.scale * reduced.min_energy + red.qubo.offset, landscape.min_energy, abs_tol=1e-9)
    walk = fold_mod.walk_model_discrepancies()
    report = (
        f"unique_minimum {unique}\n"
        f"minimizer {''.join(map(str, landscape.argmin()[0]))}\n"
        f"min_energy {fmt(landscape.min_energy)}\n"
        f"ancillas {len(red.ancillas)}\n"
        f"reduction_verified {sound}\n"
        f"walk_model_discrepancies {len(walk)}\n"
    )
    sweep = _anneal_sweep(red.qubo, p["t_runs"], p["dt"], p["shots"], cfg.seed)
    return {
        "": _landscape_csv(landscape),
        ".sweep.csv": write_csv(_sweep_header(p["shots"]), sweep),
        ".report.txt": report,
    }


def run_qubo(cfg: ExperimentConfig) -> dict[str, str]:
    p = cfg.params
    path = cfg.base_dir / p["problem"]
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    if p["variables"] == "binary":
        problem = fold_mod.read_pubo(text)
        red = fold_mod.reduce_to_qubo(problem)
        qubo = red.qubo
        report = f"variables {problem.n_vars}\nancillas {len(red.ancillas)}\n"
    else:
        problem = fold_mod.read_qubo(text, rescale=True)
        qubo = problem
        report = f"variables {problem.n}\nancillas 0\n"
    landscape = fold_mod.brute_force_minimize(problem)
    if isinstance(problem, fold_mod.QuboProblem):
        # report in the units of the input file; a positive scale keeps the order
        landscape = replace(landscape, energies=problem.scale * landscape.energies + problem.offset)
    report += f"min_energy {fmt(landscape.min_energy)}\nminimizers {len(landscape.argmin())}\n"
    sweep = _anneal_sweep(qubo, p["t_runs"], p["dt"], p["shots"], cfg.seed)
    return {
        "": _landscape_csv(landscape),
        ".sweep.csv": write_csv(_sweep_header(p["shots"]), sweep),
        ".report.txt": report,
    }


def run_cets(cfg: ExperimentConfig) -> dict[str, str]:
    p = cfg.params
    spec = CetsSpec(tuple(p["energies"]), p["beta"])
    state = prepare_cets(spec)
    n = state.n_qubits // 2
    rho = reduced_density_matrix(state, n)
    gibbs = spec.gibbs_weights()
    rows = []
    for k, e in enumerate(spec.energies):
        amp = state.amplitudes[k * (2**n) + k]
        rows.append([k, float(e), float(amp.real), float(gibbs[k]), float(rho[k, k].real)])
    return {"": write_csv(["level", "energy", "amplitude", "gibbs_weight", "reduced_diagonal"], rows)}


def run_dynamics(cfg: ExperimentConfig) -> dict[str, str]:
    p = cfg.params
    dims = p["dims"]
    masses = p["masses"]
    b = len(masses)
    charges = p["charges"] or [0.0] * b
    if len(charges) != b:
        raise ConfigError("charges and masses differ in length")

    def per_coord(values, name):
        arr = np.asarray(values, dtype=float)
        if arr.size == 1:
            return np.full((b, dims), arr[0])
        if arr.size != b * dims:
            raise ConfigError(f"{name} needs 1 or {b * dims} values")
        return arr.reshape(b, dims)

    grid = grid_mod.GridSpec.uniform(p["qubits"], p["lo"], p["hi"], dims)
    particles = grid_mod.ParticleSet(masses, charges)
    wfn = grid_mod.init_gaussian(grid, per_coord(p["center"], "center"), per_coord(p["width"], "width"),
                                 per_coord(p["momentum"], "momentum"), particles)
    if p["potential"] == "free":
        pot = None
    elif p["potential"] == "harmonic":
        pot = grid_mod.harmonic_potential(p["omega"], 0.0, masses)
    else:
        pot = grid_mod.coulomb_potential(particles, None if p["softening"] < 0 else p["softening"])
    _, trace = grid_mod.propagate(wfn, pot, p["t"], p["dt"], p["order"], p["record_every"])
    return {"": trace.to_csv()}


RUNNERS: dict[str, Callable[[ExperimentConfig], dict[str, str]]] = {
    "pea": run_pea_sweep,
    "dynamics": run_dynamics,
    "fold": run_fold,
    "qubo": run_qubo,
    "cets": run_cets,
}


def run(cfg: ExperimentConfig) -> dict[str, str]:
    outputs = RUNNERS[cfg.pipeline](cfg)
    if cfg.out is not None:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
        for suffix, text in outputs.items():
            Path(str(cfg.out) + suffix).write_text(text, newline="\n")
    return outputs
