"""Eigenvalue readout and state preparation.

Phase estimation needs a unitary whose eigenphases encode energies. The
:class:`EnergyWindow` fixes the affine map ``phase = (E - E_min) / (E_max - E_min)``
and the unitary classes below realise ``U = exp(2 pi i (H - E_min) / (E_max - E_min))``
so that ``U |e_k> = exp(2 pi i phase_k) |e_k>``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .errors import DomainError
from .pauli import DENSE_QUBIT_CAP, PauliSum, dense_matrix
from .statevector import (
    StateVector,
    _subregister_values,
    apply_circuit,
    apply_gate,
    apply_qft,
    cnot,
    hadamard,
    load_amplitudes,
    measure,
    new_basis_state,
    phase,
    sample,
)
from .trotter import trotter_circuit


@dataclass(frozen=True)
class EnergyWindow:
    e_min: float
    e_max: float

    def __post_init__(self):
        if not self.e_min < self.e_max:
            raise DomainError(f"empty energy window [{self.e_min}, {self.e_max})")

    @property
    def width(self) -> float:
        return self.e_max - self.e_min

    @property
    def evolution_time(self) -> float:
        """Time ``t`` with ``U = exp(-i (H - E_min) t)``; negative because the phase sign is positive."""
        return -2 * np.pi / self.width

    def phase(self, energy):
        return (np.asarray(energy) - self.e_min) / self.width

    def energy(self, phase):
        return self.e_min + np.asarray(phase) * self.width

    def contains(self, energy) -> bool:
        e = np.asarray(energy)
        return bool(np.all((e >= self.e_min) & (e < self.e_max)))

    @classmethod
    def from_pauli_sum(cls, h: PauliSum, padding: float = 0.01) -> "EnergyWindow":
        """Window from the coefficient bound ``|E - c_I| <= sum |c_P|``, widened by ``padding`` on each side."""
        center = float(np.real(h.identity_coefficient()))
        radius = h.norm_bound()
        if radius == 0:
            return cls(center - 0.5, center + 0.5)
        pad = padding * 2 * radius
        return cls(center - radius - pad, center + radius + pad)


class PhaseUnitary:
    """Base class: a system unitary whose integer powers can be formed."""

    n_qubits: int
    window: EnergyWindow | None = None
    hamiltonian: PauliSum | None = None

    def base_matrix(self) -> np.ndarray:
        raise NotImplementedError

    def power(self, k: int) -> np.ndarray:
        """Dense ``U**k`` for ``k`` a power of two, by repeated squaring of the base unitary."""
        if k < 1:
            raise DomainError("power must be positive")
        cache = self.__dict__.setdefault("_powers", {})
        if k in cache:
            return cache[k]
        if k == 1:
            m = self.base_matrix()
        elif k & (k - 1) == 0:
            half = self.power(k // 2)
            m = half @ half
        else:
            m = np.linalg.matrix_power(self.base_matrix(), k)
        cache[k] = m
        return m

    def aliasing_risk(self) -> bool:
        """True when the coefficient bound of the Hamiltonian is not inside the window."""
        if self.window is None or self.hamiltonian is None:
            return False
        c = float(np.real(self.hamiltonian.identity_coefficient()))
        r = self.hamiltonian.norm_bound()
        return not (self.window.e_min <= c - r and c + r < self.window.e_max)


class DiagonalUnitary(PhaseUnitary):
    """``U = diag(exp(2 pi i phases))`` on the computational basis."""

    def __init__(self, phases: Sequence[float], window: EnergyWindow | None = None):
        self.phases = np.asarray(phases, dtype=float)
        n = int(round(math.log2(self.phases.size)))
        if 2**n != self.phases.size:
            raise DomainError("phase list length must be a power of two")
        self.n_qubits = n
        self.window = window

    def base_matrix(self) -> np.ndarray:
        return np.diag(np.exp(2j * np.pi * self.phases))

    def power(self, k: int) -> np.ndarray:
        # reduce mod 1 before exponentiating so large powers stay accurate
        return np.diag(np.exp(2j * np.pi * np.mod(self.phases * k, 1.0)))


class ExactUnitary(PhaseUnitary):
    """``exp(2 pi i (H - E_min)/width)`` from the dense matrix exponential."""

    def __init__(self, h: PauliSum, window: EnergyWindow | None = None):
        self.hamiltonian = h.real()
        self.window = window or EnergyWindow.from_pauli_sum(h)
        self.n_qubits = h.n_qubits

    def base_matrix(self) -> np.ndarray:
        h = dense_matrix(self.hamiltonian)
        shifted = h - self.window.e_min * np.eye(h.shape[0])
        return scipy.linalg.expm(2j * np.pi * shifted / self.window.width)


class TrotterUnitary(PhaseUnitary):
    """Product-formula version of :class:`ExactUnitary`.

    The base unitary uses ``steps`` product steps. ``U**(2**j)`` is the base
    circuit repeated ``2**j`` times, so the step count grows with the power and
    every ancilla sees the same splitting error per unit of phase.
    """

    def __init__(self, h: PauliSum, window: EnergyWindow | None = None, steps: int = 100, order: int = 2):
        self.hamiltonian = h.real()
        self.window = window or EnergyWindow.from_pauli_sum(h)
        self.n_qubits = h.n_qubits
        self.plan = trotter_circuit(self.hamiltonian, self.window.evolution_time, steps, order)

    def base_matrix(self) -> np.ndarray:
        shift = np.exp(-2j * np.pi * self.window.e_min / self.window.width)
        return shift * self.plan.unitary()


def _apply_controlled_power(amps: np.ndarray, n_sys: int, n_total: int, control: int, u: np.ndarray) -> np.ndarray:
    """Apply ``u`` to the low ``n_sys`` qubits on branches where ``control`` is 1."""
    blocks = amps.reshape(2 ** (n_total - n_sys), 2**n_sys)
    on = ((np.arange(blocks.shape[0]) >> (control - n_sys)) & 1) == 1
    out = blocks.copy()
    out[on] = blocks[on] @ u.T
    return out.reshape(-1)


@dataclass
class SpectralResult:
    """Ancilla readouts of a phase-estimation run.

    ``outcomes`` holds the integer ancilla values of every shot; value ``k``
    stands for phase ``k / 2**n_bits``.
    """

    n_bits: int
    outcomes: np.ndarray
    window: EnergyWindow | None = None
    probabilities: np.ndarray | None = None
    post_state: StateVector | None = None
    aliasing_risk: bool = False

    @property
    def shots(self) -> int:
        return int(self.outcomes.size)

    def bits(self, value: int) -> str:
        """Binary fraction digits of the phase, most significant first."""
        return format(int(value), f"0{self.n_bits}b")

    def phase(self, value):
        return np.asarray(value) / 2**self.n_bits

    def energy(self, value):
        if self.window is None:
            raise DomainError("no energy window attached")
        return self.window.energy(self.phase(value))

    def counts(self) -> dict[int, int]:
        vals, cnt = np.unique(self.outcomes, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, cnt)}

    def weights(self) -> dict[int, float]:
        return {v: c / self.shots for v, c in self.counts().items()}

    def most_likely(self) -> int:
        vals, cnt = np.unique(self.outcomes, return_counts=True)
        return int(vals[np.argmax(cnt)])

    def peaks(self, min_weight: float = 0.0, gap: int = 1) -> list[tuple[int, float]]:
        """Cluster the histogram into runs of neighbouring values.

        Values closer than ``gap + 1`` (cyclically) join one cluster. Returns
        ``(mode value, cluster weight)`` pairs with weight at least
        ``min_weight``, heaviest first.
        """
        w = self.weights()
        if not w:
            return []
        size = 2**self.n_bits
        occupied = sorted(w)
        clusters: list[list[int]] = [[occupied[0]]]
        for v in occupied[1:]:
            if v - clusters[-1][-1] <= gap:
                clusters[-1].append(v)
            else:
                clusters.append([v])
        if len(clusters) > 1 and clusters[0][0] + size - clusters[-1][-1] <= gap:
            clusters[0] = clusters.pop() + clusters[0]
        out = []
        for c in clusters:
            mass = sum(w[v] for v in c)
            if mass >= min_weight:
                out.append((max(c, key=lambda v: w[v]), mass))
        return sorted(out, key=lambda p: -p[1])

    def to_csv(self) -> str:
        """Rows ``bits,phase,energy,weight`` for every observed value."""
        buf = io.StringIO()
        buf.write("bits,phase,energy,weight\n")
        for v, wt in sorted(self.weights().items()):
            e = f"{float(self.energy(v)):.17g}" if self.window is not None else ""
            buf.write(f"{self.bits(v)},{float(self.phase(v)):.17g},{e},{float(wt):.17g}\n")
        return buf.getvalue()


def phase_estimation(unitary: PhaseUnitary, input_state: StateVector, n_ancilla: int,
                     window: EnergyWindow | None = None, shots: int = 1, rng=None) -> SpectralResult:
    """Textbook phase estimation with an ``n_ancilla``-qubit readout register.

    The system occupies the low qubits and the ancillas sit above it. With
    ``shots == 1`` the ancillas are measured projectively and the collapsed
    system state is returned in ``post_state``; otherwise ``shots`` outcomes
    are drawn from the ancilla distribution of the same circuit.
    """
    if n_ancilla < 1:
        raise DomainError("need at least one ancilla")
    ns = input_state.n_qubits
    if ns != unitary.n_qubits:
        raise DomainError("unitary and input state act on different register sizes")
    if abs(input_state.norm() - 1) > 1e-10:
        raise DomainError("input state is not normalized")
    n = ns + n_ancilla
    window = window or unitary.window
    state = input_state.tensor(new_basis_state(n_ancilla, 0))
    state = apply_circuit(state, [hadamard(ns + j) for j in range(n_ancilla)])
    amps = state.amplitudes
    for j in range(n_ancilla):
        amps = _apply_controlled_power(amps, ns, n, ns + j, unitary.power(2**j))
    state = apply_qft(StateVector(n, amps), (ns, n), inverse=True)

    ancillas = list(range(ns, n))
    probs = np.bincount(_subregister_values(n, tuple(ancillas)), weights=state.probabilities(),
                        minlength=2**n_ancilla)
    if shots == 1:
        record, collapsed = measure(state, ancillas, rng)
        outcomes = np.array([record.value])
        blocks = collapsed.amplitudes.reshape(2**n_ancilla, 2**ns)
        post = StateVector(ns, blocks[record.value] / np.linalg.norm(blocks[record.value]))
    else:
        outcomes = sample(state, ancillas, shots, rng)
        post = None
    return SpectralResult(n_ancilla, np.asarray(outcomes), window, probs, post, unitary.aliasing_risk())


@dataclass
class IterativeResult:
    bits: str
    ambiguous: list[int] = field(default_factory=list)
    one_fractions: list[float] = field(default_factory=list)
    window: EnergyWindow | None = None
    post_state: StateVector | None = None

    @property
    def value(self) -> int:
        return int(self.bits, 2)

    @property
    def phase(self) -> float:
        return self.value / 2 ** len(self.bits)

    @property
    def energy(self) -> float:
        if self.window is None:
            raise DomainError("no energy window attached")
        return float(self.window.energy(self.phase))


def iterative_pea(unitary: PhaseUnitary, input_state: StateVector, n_bits: int, rng=None,
                  shots_per_bit: int = 101, ambiguity: float = 0.1) -> IterativeResult:
    """Extract ``n_bits`` phase bits with a single reused ancilla, least significant bit first.

    Round ``k`` applies ``U**(2**(k-1))`` controlled on the ancilla, then a
    phase ``-2 pi * 0.0 b_{k+1} ... b_n`` that cancels the bits already read.
    Each round is sampled ``shots_per_bit`` times and decided by majority;
    rounds whose frequency of ``1`` lies within ``ambiguity`` of 1/2 are listed
    in ``ambiguous``. The system register carries over between rounds,
    collapsed onto the majority outcome.
    """
    if n_bits < 1:
        raise DomainError("need at least one bit")
    if shots_per_bit < 1 or shots_per_bit % 2 == 0:
        raise DomainError("shots_per_bit must be a positive odd number")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    ns = input_state.n_qubits
    n = ns + 1
    anc = ns
    system = input_state.amplitudes
    bits = [0] * (n_bits + 1)  # 1-based
    ambiguous, fractions = [], []
    for k in range(n_bits, 0, -1):
        omega = -2 * np.pi * sum(bits[l] / 2 ** (l - k + 1) for l in range(k + 1, n_bits + 1))
        state = StateVector(ns, system).tensor(new_basis_state(1, 0))
        state = apply_gate(state, hadamard(anc))
        amps = _apply_controlled_power(state.amplitudes, ns, n, anc, unitary.power(2 ** (k - 1)))
        state = apply_gate(StateVector(n, amps), phase(anc, omega))
        state = apply_gate(state, hadamard(anc))
        blocks = state.amplitudes.reshape(2, 2**ns)
        p1 = float(np.vdot(blocks[1], blocks[1]).real)
        ones = gen.binomial(shots_per_bit, min(max(p1, 0.0), 1.0))
        frac = ones / shots_per_bit
        fractions.append(frac)
        b = int(frac > 0.5)
        if abs(frac - 0.5) < ambiguity:
            ambiguous.append(k)
        bits[k] = b
        system = blocks[b] / np.linalg.norm(blocks[b])
    window = unitary.window
    return IterativeResult("".join(str(b) for b in bits[1:]), ambiguous, fractions[::-1], window,
                           StateVector(ns, system))


# --------------------------------------------------------------------------
# state preparation

def prepare_fock(occupations) -> StateVector:
    """Basis state with qubit ``i`` set for every occupied mode ``i + 1``.

    ``occupations`` lists modes 1..M left to right, e.g. ``"0100"`` occupies
    mode 2 only.
    """
    occ = [int(c) for c in occupations]
    if any(b not in (0, 1) for b in occ):
        raise DomainError("occupations must be 0 or 1")
    index = sum(b << i for i, b in enumerate(occ))
    return new_basis_state(len(occ), index)


def linear_schedule(tau: float) -> tuple[float, float]:
    return 1.0 - tau, tau


def ground_state(h: PauliSum) -> tuple[float, StateVector]:
    """Lowest eigenpair from dense diagonalization (small registers only)."""
    vals, vecs = np.linalg.eigh(dense_matrix(h.real(), DENSE_QUBIT_CAP))
    return float(vals[0]), StateVector(h.n_qubits, vecs[:, 0])


def spectral_gap(h: PauliSum) -> float:
    vals = np.linalg.eigvalsh(dense_matrix(h.real(), DENSE_QUBIT_CAP))
    return float(vals[1] - vals[0])


@dataclass
class AspResult:
    state: StateVector
    n_steps: int
    initial_overlap: float | None = None
    fidelity: float | None = None


def evolve_schedule(state: StateVector, h_start: PauliSum, h_end: PauliSum,
                    schedule: Callable[[float], tuple[float, float]], t_run: float, n_steps: int,
                    order: int = 2) -> StateVector:
    """Integrate ``H(tau) = A(tau) h_start + B(tau) h_end`` over ``t_run``.

    Each of the ``n_steps`` steps freezes the Hamiltonian at the step midpoint
    and applies one product step of the requested order.
    """
    h_start, h_end = h_start.real(), h_end.real()
    letters = sorted({t.letters for t in h_start.terms} | {t.letters for t in h_end.terms})
    cs = np.array([h_start.coefficient(k).real for k in letters])
    ce = np.array([h_end.coefficient(k).real for k in letters])
    dt = t_run / n_steps
    amps = state.amplitudes
    base = trotter_circuit(PauliSum(state.n_qubits, {k: 1.0 for k in letters}), dt, 1, order)
    for step in range(n_steps):
        a, b = schedule((step + 0.5) / n_steps)
        coeff = a * cs + b * ce
        base.terms = [type(t)(c, t.letters) for t, c in zip(base.terms, coeff)]
        amps = base.apply_array(amps, steps=1)
    return StateVector(state.n_qubits, amps)


def adiabatic_state_prep(h_start: PauliSum, h_end: PauliSum, t_run: float, dt: float,
                         schedule: Callable[[float], tuple[float, float]] = linear_schedule,
                         initial: StateVector | None = None, order: int = 2) -> AspResult:
    """Adiabatic state preparation from the ground state of ``h_start``.

    When the register fits the dense oracle, the result carries the squared
    overlap of the initial state and of the final state with the exact ground
    state of ``h_end``.
    """
    if not t_run > 0:
        raise DomainError("t_run must be positive")
    if not dt > 0:
        raise DomainError("dt must be positive")
    if h_start.n_qubits != h_end.n_qubits:
        raise DomainError("start and end Hamiltonians act on different register sizes")
    if initial is None:
        _, initial = ground_state(h_start)
    n_steps = max(1, math.ceil(t_run / dt - 1e-9))
    final = evolve_schedule(initial, h_start, h_end, schedule, t_run, n_steps, order)
    overlap = fidelity = None
    if h_end.n_qubits <= DENSE_QUBIT_CAP:
        _, g = ground_state(h_end)
        overlap = initial.fidelity(g)
        fidelity = final.fidelity(g)
    return AspResult(final, n_steps, overlap, fidelity)


@dataclass(frozen=True)
class CetsSpec:
    """Spectrum and inverse temperature of a coherent thermal encoding."""

    energies: tuple[float, ...]
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "energies", tuple(float(e) for e in self.energies))
        if not self.energies:
            raise DomainError("empty spectrum")
        if np.isnan(self.beta) or self.beta < 0:
            raise DomainError("beta must be non-negative")

    def gibbs_weights(self) -> np.ndarray:
        e = np.asarray(self.energies)
        shifted = e - e.min()
        if np.isinf(self.beta):
            w = (shifted == 0).astype(float)
        else:
            w = np.exp(-self.beta * shifted)
        return w / w.sum()

    @property
    def log_partition_function(self) -> float:
        e = np.asarray(self.energies)
        if np.isinf(self.beta):
            return -np.inf if e.min() > 0 else (np.inf if e.min() < 0 else math.log(np.sum(e == 0)))
        return float(-self.beta * e.min() + np.log(np.sum(np.exp(-self.beta * (e - e.min())))))

    @property
    def partition_function(self) -> float:
        return float(np.exp(self.log_partition_function))


def prepare_cets(spec: CetsSpec, eigenbasis: np.ndarray | None = None) -> StateVector:
    """Build ``sum_k sqrt(exp(-beta E_k)/Z) |e_k>|e_k>`` on two equal registers.

    The weights are loaded on the first (low) register, copied to the second
    with CNOTs, and both registers are rotated by ``eigenbasis`` (columns are
    the eigenvectors ``|e_k>``; the computational basis by default). Spectra
    shorter than a power of two are padded with zero-weight levels.
    """
    weights = spec.gibbs_weights()
    n = max(1, math.ceil(math.log2(len(weights))))
    padded = np.zeros(2**n)
    padded[: len(weights)] = weights
    state = load_amplitudes(padded).tensor(new_basis_state(n, 0))
    state = apply_circuit(state, [cnot(q, n + q) for q in range(n)])
    if eigenbasis is not None:
        v = np.asarray(eigenbasis, dtype=complex)
        if v.shape != (2**n, 2**n):
            raise DomainError(f"eigenbasis must be {2**n}x{2**n}")
        if np.max(np.abs(v.conj().T @ v - np.eye(2**n))) > 1e-10:
            raise DomainError("eigenbasis is not unitary")
        m = state.amplitudes.reshape(2**n, 2**n)  # [high, low]
        state = StateVector(2 * n, (v @ m @ v.T).reshape(-1))
    return state


def reduced_density_matrix(state: StateVector, n_low: int) -> np.ndarray:
    """Density matrix of the low ``n_low`` qubits with the rest traced out."""
    m = state.amplitudes.reshape(2 ** (state.n_qubits - n_low), 2**n_low)
    return m.T @ m.conj()
