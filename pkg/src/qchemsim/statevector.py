"""Dense statevector register.

Convention used everywhere in the package: qubit 0 is the least significant
bit of a basis index, so basis index ``x = sum(b_q << q)``.

Public operations return new :class:`StateVector` objects and never mutate
their input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .pauli import PauliSum

NORM_TOL = 1e-10


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2**self.n_qubits,):
            raise DomainError(
                f"expected {2**self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got shape {self.amplitudes.shape}"
            )

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> "StateVector":
        a = np.asarray(amplitudes, dtype=complex)
        n = int(round(np.log2(a.size))) if a.size else -1
        if n < 0 or 2**n != a.size:
            raise DomainError(f"amplitude count {a.size} is not a power of two")
        if normalize:
            nrm = np.linalg.norm(a)
            if nrm == 0:
                raise DomainError("cannot normalize the zero vector")
            a = a / nrm
        return cls(n, a)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def fidelity(self, other: "StateVector") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def tensor(self, high: "StateVector") -> "StateVector":
        """Register with ``self`` on the low qubits and ``high`` above it."""
        return StateVector(self.n_qubits + high.n_qubits, np.kron(high.amplitudes, self.amplitudes))


def new_basis_state(n_qubits: int, index: int = 0) -> StateVector:
    if n_qubits < 0:
        raise DomainError("qubit count must be non-negative")
    if not 0 <= index < 2**n_qubits:
        raise DomainError(f"basis index {index} outside [0, {2**n_qubits})")
    a = np.zeros(2**n_qubits, dtype=complex)
    a[index] = 1.0
    return StateVector(n_qubits, a)


def uniform_state(n_qubits: int) -> StateVector:
    return StateVector(n_qubits, np.full(2**n_qubits, 2 ** (-n_qubits / 2), dtype=complex))


# --------------------------------------------------------------------------
# gates

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

GATE_KINDS = (
    "H", "X", "Y", "Z", "PHASE", "RX", "RY", "RZ", "CNOT", "CPHASE", "DIAGONAL",
)


def _one_qubit_matrix(kind: str, theta: float) -> np.ndarray:
    if kind == "H":
        return _H
    if kind == "X":
        return _X
    if kind == "Y":
        return _Y
    if kind == "Z":
        return _Z
    if kind == "PHASE":
        return np.array([[1, 0], [0, np.exp(1j * theta)]], dtype=complex)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    if kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "RZ":
        return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex)
    raise DomainError(f"{kind} is not a single-qubit gate")


@dataclass(frozen=True)
class Gate:
    """An elementary gate.

    ``kind`` is one of :data:`GATE_KINDS`. ``CNOT`` and ``CPHASE`` take one
    target and one control. ``DIAGONAL`` applies ``exp(i * phase_fn(x))``
    where ``x`` is the integer value of its target qubits, ``targets[0]``
    being the least significant bit.
    """

    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    theta: float = 0.0
    phase_fn: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise DomainError(f"unknown gate kind {self.kind!r}")
        qubits = tuple(self.targets) + tuple(self.controls)
        if len(set(qubits)) != len(qubits):
            raise DomainError(f"repeated qubit index in {self.kind} gate: {qubits}")
        if any(q < 0 for q in qubits):
            raise DomainError("negative qubit index")
        if self.kind == "DIAGONAL":
            if self.phase_fn is None or not self.targets:
                raise DomainError("diagonal gate needs targets and a phase function")
        elif len(self.targets) != 1:
            raise DomainError(f"{self.kind} acts on exactly one target")
        if self.kind in ("CNOT", "CPHASE") and len(self.controls) != 1:
            raise DomainError(f"{self.kind} needs exactly one control")

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(self.targets) + tuple(self.controls)

    def base_kind(self) -> str:
        return {"CNOT": "X", "CPHASE": "PHASE"}.get(self.kind, self.kind)

    def matrix(self) -> np.ndarray:
        """Unitary on ``(targets..., controls...)`` with targets as the low bits."""
        if self.kind == "DIAGONAL":
            x = np.arange(2 ** len(self.targets))
            return np.diag(np.exp(1j * np.asarray(self.phase_fn(x), dtype=float)))
        u = _one_qubit_matrix(self.base_kind(), self.theta)
        if not self.controls:
            return u
        dim = 2 ** (1 + len(self.controls))
        m = np.eye(dim, dtype=complex)
        m[-2:, -2:] = u
        return m

    def inverse(self) -> "Gate":
        if self.kind in ("H", "X", "Y", "Z", "CNOT"):
            return self
        if self.kind == "DIAGONAL":
            fn = self.phase_fn
            return Gate("DIAGONAL", self.targets, self.controls, phase_fn=lambda x: -np.asarray(fn(x)))
        return Gate(self.kind, self.targets, self.controls, -self.theta)


def hadamard(q: int) -> Gate:
    return Gate("H", (q,))


def pauli_x(q: int) -> Gate:
    return Gate("X", (q,))


def pauli_y(q: int) -> Gate:
    return Gate("Y", (q,))


def pauli_z(q: int) -> Gate:
    return Gate("Z", (q,))


def phase(q: int, theta: float) -> Gate:
    return Gate("PHASE", (q,), theta=theta)


def rx(q: int, theta: float) -> Gate:
    return Gate("RX", (q,), theta=theta)


def ry(q: int, theta: float) -> Gate:
    return Gate("RY", (q,), theta=theta)


def rz(q: int, theta: float) -> Gate:
    return Gate("RZ", (q,), theta=theta)


def cnot(control: int, target: int) -> Gate:
    return Gate("CNOT", (target,), (control,))


def cphase(control: int, target: int, theta: float) -> Gate:
    return Gate("CPHASE", (target,), (control,), theta)


def diagonal_phase(targets: Sequence[int], phase_fn: Callable[[np.ndarray], np.ndarray]) -> Gate:
    return Gate("DIAGONAL", tuple(targets), phase_fn=phase_fn)


@lru_cache(maxsize=256)
def _controlled_pair_indices(n: int, target: int, controls: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(2**n, dtype=np.int64)
    mask = 1 << target
    keep = (idx & mask) == 0
    for c in controls:
        keep &= (idx >> c) & 1 == 1
    i0 = idx[keep]
    return i0, i0 | mask


@lru_cache(maxsize=256)
def _subregister_values(n: int, qubits: tuple[int, ...]) -> np.ndarray:
    idx = np.arange(2**n, dtype=np.int64)
    x = np.zeros_like(idx)
    for k, q in enumerate(qubits):
        x |= ((idx >> q) & 1) << k
    return x


def apply_single_qubit(amps: np.ndarray, n: int, u: np.ndarray, target: int,
                       controls: tuple[int, ...] = ()) -> np.ndarray:
    """Return ``amps`` with the 2x2 matrix ``u`` applied to ``target``.

    Leading batch axes on ``amps`` are allowed.
    """
    if not controls:
        batch = amps.shape[:-1]
        psi = amps.reshape(*batch, 2 ** (n - 1 - target), 2, 2**target)
        return np.einsum("ij,...ajb->...aib", u, psi).reshape(amps.shape)
    i0, i1 = _controlled_pair_indices(n, target, tuple(controls))
    out = amps.copy()
    a0, a1 = amps[..., i0], amps[..., i1]
    out[..., i0] = u[0, 0] * a0 + u[0, 1] * a1
    out[..., i1] = u[1, 0] * a0 + u[1, 1] * a1
    return out


def _apply_gate_array(amps: np.ndarray, n: int, gate: Gate) -> np.ndarray:
    if any(q >= n for q in gate.qubits):
        raise DomainError(f"{gate.kind} gate on qubits {gate.qubits} outside a {n}-qubit register")
    if gate.kind == "DIAGONAL":
        x = _subregister_values(n, tuple(gate.targets))
        table = np.exp(1j * np.asarray(gate.phase_fn(np.arange(2 ** len(gate.targets))), dtype=float))
        factor = table[x]
        if gate.controls:
            on = _subregister_values(n, tuple(gate.controls)) == 2 ** len(gate.controls) - 1
            factor = np.where(on, factor, 1.0)
        return amps * factor
    if gate.kind in ("Z", "PHASE", "RZ", "CPHASE"):
        u = _one_qubit_matrix(gate.base_kind(), gate.theta)
        bits = _subregister_values(n, (gate.targets[0],))
        factor = np.where(bits == 1, u[1, 1], u[0, 0])
        if gate.controls:
            on = _subregister_values(n, tuple(gate.controls)) == 2 ** len(gate.controls) - 1
            factor = np.where(on, factor, 1.0)
        return amps * factor
    u = _one_qubit_matrix(gate.base_kind(), gate.theta)
    return apply_single_qubit(amps, n, u, gate.targets[0], tuple(gate.controls))


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    return StateVector(state.n_qubits, _apply_gate_array(state.amplitudes, state.n_qubits, gate))


def apply_circuit(state: StateVector, gates: Sequence[Gate]) -> StateVector:
    amps = state.amplitudes
    for g in gates:
        amps = _apply_gate_array(amps, state.n_qubits, g)
    return StateVector(state.n_qubits, amps)


def inverse_circuit(gates: Sequence[Gate]) -> list[Gate]:
    return [g.inverse() for g in reversed(gates)]


# --------------------------------------------------------------------------
# quantum Fourier transform

def _qubit_range(qubits, n: int) -> list[int]:
    qs = list(range(*qubits)) if isinstance(qubits, tuple) and len(qubits) == 2 else list(qubits)
    if not qs:
        raise DomainError("QFT needs a non-empty qubit range")
    if qs != list(range(qs[0], qs[0] + len(qs))):
        raise DomainError(f"QFT qubits must be a contiguous ascending range, got {qs}")
    if qs[0] < 0 or qs[-1] >= n:
        raise DomainError(f"QFT range {qs[0]}..{qs[-1]} outside a {n}-qubit register")
    return qs


def qft_circuit(qubits: Sequence[int], inverse: bool = False) -> list[Gate]:
    """Hadamard + controlled-phase ladder followed by qubit reversal.

    Maps ``|x>`` to ``N^{-1/2} sum_k exp(2 pi i x k / N) |k>`` on the
    sub-register ``qubits`` (``qubits[0]`` least significant). The gate count
    is ``m(m+1)/2`` plus ``3*floor(m/2)`` CNOTs for the reversal.
    """
    qs = list(qubits)
    m = len(qs)
    gates: list[Gate] = []
    for j in range(m - 1, -1, -1):
        gates.append(hadamard(qs[j]))
        for l in range(j - 1, -1, -1):
            gates.append(cphase(qs[l], qs[j], np.pi / 2 ** (j - l)))
    for i in range(m // 2):
        a, b = qs[i], qs[m - 1 - i]
        gates += [cnot(a, b), cnot(b, a), cnot(a, b)]
    return inverse_circuit(gates) if inverse else gates


def apply_qft(state: StateVector, qubits=None, inverse: bool = False) -> StateVector:
    """Apply the QFT (or its inverse) to a contiguous range of qubits.

    ``qubits`` is a ``(start, stop)`` tuple, a ``range`` or a list; the
    default is the whole register.
    """
    if qubits is None:
        qubits = range(state.n_qubits)
    qs = _qubit_range(qubits, state.n_qubits)
    return apply_circuit(state, qft_circuit(qs, inverse))


# --------------------------------------------------------------------------
# measurement

@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome of a projective measurement.

    ``outcome`` lists bits with the last measured qubit leftmost, so measuring
    qubits ``[0, 1]`` of ``|10>`` (qubit 1 set) gives ``"10"``.
    """

    outcome: str
    value: int
    qubits: tuple[int, ...]
    probability: float
    rng_seed: int | None


def _rng(rng) -> tuple[np.random.Generator, int | None]:
    if isinstance(rng, np.random.Generator):
        return rng, None
    return np.random.default_rng(rng), (None if rng is None else int(rng))


def marginal_probabilities(state: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Born probabilities of the integer values of ``qubits`` (``qubits[0]`` least significant)."""
    qubits = tuple(qubits)
    if any(not 0 <= q < state.n_qubits for q in qubits):
        raise DomainError(f"qubits {qubits} outside a {state.n_qubits}-qubit register")
    x = _subregister_values(state.n_qubits, qubits)
    return np.bincount(x, weights=state.probabilities(), minlength=2 ** len(qubits))


def measure(state: StateVector, qubits: Sequence[int], rng=None) -> tuple[MeasurementRecord, StateVector]:
    """Projectively measure ``qubits``; returns the record and the collapsed, renormalized state."""
    qubits = tuple(qubits)
    gen, seed = _rng(rng)
    probs = marginal_probabilities(state, qubits)
    probs = probs / probs.sum()
    value = int(gen.choice(len(probs), p=probs))
    keep = _subregister_values(state.n_qubits, qubits) == value
    amps = np.where(keep, state.amplitudes, 0)
    amps = amps / np.linalg.norm(amps)
    bits = format(value, f"0{len(qubits)}b") if qubits else ""
    record = MeasurementRecord(bits, value, qubits, float(probs[value]), seed)
    return record, StateVector(state.n_qubits, amps)


def sample(state: StateVector, qubits: Sequence[int], shots: int, rng=None) -> np.ndarray:
    """Draw ``shots`` independent Born-rule outcomes (integer values) without collapsing."""
    gen, _ = _rng(rng)
    probs = marginal_probabilities(state, qubits)
    return gen.choice(len(probs), size=shots, p=probs / probs.sum())


# --------------------------------------------------------------------------
# amplitude loading

def load_amplitudes(target, phase_fn: Callable[[np.ndarray], np.ndarray] | None = None) -> StateVector:
    """Prepare amplitudes proportional to ``sqrt(target)`` one qubit at a time.

    Starting from ``|0...0>``, the most significant qubit is rotated first.
    Each following qubit gets a Y rotation conditioned on the already-prepared
    higher bits, with angle ``2*arccos(sqrt(m_left / m_prefix))`` taken from
    the prefix-sum masses of ``target``. An optional diagonal phase is applied
    last.
    """
    w = np.asarray(target, dtype=float)
    if w.ndim != 1:
        raise DomainError("target must be one-dimensional")
    n = int(round(np.log2(w.size))) if w.size else -1
    if n < 0 or 2**n != w.size:
        raise DomainError(f"target length {w.size} is not a power of two")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise DomainError("target must be finite and non-negative")
    if w.sum() <= 0:
        raise DomainError("target has zero mass")
    w = w / w.sum()

    amps = np.zeros(2**n, dtype=complex)
    amps[0] = 1.0
    for q in range(n - 1, -1, -1):
        masses = w.reshape(2 ** (n - 1 - q), 2, 2**q).sum(axis=2)
        total = masses.sum(axis=1)
        ratio = np.divide(masses[:, 0], total, out=np.ones_like(total), where=total > 0)
        theta = 2 * np.arccos(np.sqrt(np.clip(ratio, 0.0, 1.0)))
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        rot = np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)
        psi = amps.reshape(2 ** (n - 1 - q), 2, 2**q)
        amps = np.einsum("pij,pjb->pib", rot, psi).reshape(-1)
    state = StateVector(n, amps)
    if phase_fn is not None:
        state = apply_gate(state, diagonal_phase(range(n), phase_fn))
    return state


# --------------------------------------------------------------------------
# expectation values

def expectation(state: StateVector, observable) -> float:
    """``<psi|A|psi>`` for a Hermitian PauliSum, a diagonal array, or a function of basis index."""
    amps = state.amplitudes
    if isinstance(observable, PauliSum):
        if observable.n_qubits != state.n_qubits:
            raise DomainError("observable and state act on different register sizes")
        if not observable.is_hermitian(1e-12):
            raise DomainError("observable has complex Pauli coefficients")
        val = np.vdot(amps, observable.real().apply(amps))
    else:
        diag = observable(np.arange(state.dim)) if callable(observable) else observable
        diag = np.asarray(diag)
        if np.iscomplexobj(diag) and np.max(np.abs(diag.imag), initial=0) > 1e-12:
            raise DomainError("diagonal observable is not real")
        val = np.dot(np.abs(amps) ** 2, diag.real)
    val = complex(val)
    if abs(val.imag) > 1e-10:
        raise DomainError(f"expectation has imaginary part {val.imag:.3g}")
    return val.real


def read_amplitudes(text: str) -> StateVector:
    """Parse one ``re im`` pair per line into a state (fixture format)."""
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    amps = np.array([complex(float(r[0]), float(r[1])) for r in rows])
    return StateVector.from_amplitudes(amps)


def write_amplitudes(state: StateVector) -> str:
    return "".join(f"{a.real:.17g} {a.imag:.17g}\n" for a in state.amplitudes)
