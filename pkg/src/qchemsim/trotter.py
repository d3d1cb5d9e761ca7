"""Product-formula time evolution for Pauli sums.

Every factor ``exp(-i c P dt)`` is applied exactly (``P**2 = I``), so the only
error left in :class:`TrotterPlan` is splitting error between non-commuting
terms. Terms run in lexicographic order of their letter strings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .pauli import PauliSum, PauliTerm, _masks, parity
from .statevector import Gate, StateVector, cnot, hadamard, rx, rz


class _Rotation:
    """Precomputed ``exp(-i * angle * P)`` kernel for one Pauli string."""

    __slots__ = ("letters", "x", "signed_phase", "identity")

    def __init__(self, letters: str, dim: int):
        x, z, ny = _masks(letters)
        idx = np.arange(dim, dtype=np.int64)
        self.letters = letters
        self.x = idx ^ x
        self.signed_phase = (1j**ny) * (1 - 2 * parity(idx & z))
        self.identity = x == 0 and z == 0

    def apply(self, amps: np.ndarray, angle: float) -> np.ndarray:
        if self.identity:
            return amps * np.exp(-1j * angle)
        p_amps = np.empty_like(amps)
        p_amps[..., self.x] = self.signed_phase * amps
        return np.cos(angle) * amps - 1j * np.sin(angle) * p_amps


def apply_pauli_exponential(amps: np.ndarray, term: PauliTerm, dt: float) -> np.ndarray:
    """``exp(-i * term.coefficient * P * dt) @ amps`` for a real coefficient."""
    rot = _Rotation(term.letters, amps.shape[-1])
    return rot.apply(amps, float(np.real(term.coefficient)) * dt)


def pauli_exponential_circuit(letters: str, angle: float) -> list[Gate]:
    """Gate sequence for ``exp(-i * angle * P)``.

    Each X/Y factor is rotated to Z (H for X, RX(pi/2) for Y), a CNOT ladder
    collects the parity onto the highest support qubit, RZ(2*angle) applies
    the phase, and the basis change is undone. Identity strings give an empty
    circuit (the global phase is dropped).
    """
    support = [q for q, c in enumerate(letters) if c != "I"]
    if not support:
        return []
    pre: list[Gate] = []
    post: list[Gate] = []
    for q in support:
        if letters[q] == "X":
            pre.append(hadamard(q))
            post.append(hadamard(q))
        elif letters[q] == "Y":
            pre.append(rx(q, np.pi / 2))
            post.append(rx(q, -np.pi / 2))
    ladder = [cnot(a, b) for a, b in zip(support[:-1], support[1:])]
    return pre + ladder + [rz(support[-1], 2 * angle)] + ladder[::-1] + post


@dataclass
class TrotterPlan:
    """A product formula for ``exp(-i H t)`` split into ``n_steps`` steps of length ``dt``."""

    terms: list[PauliTerm]
    dt: float
    n_steps: int
    order: int = 1
    n_qubits: int = 0
    _rotations: list[_Rotation] = field(default_factory=list, repr=False)

    @property
    def total_time(self) -> float:
        return self.dt * self.n_steps

    def _sequence(self) -> list[tuple[_Rotation, float]]:
        """One step as (kernel, angle) pairs."""
        coeffs = [float(np.real(t.coefficient)) for t in self.terms]
        if self.order == 1:
            return [(r, c * self.dt) for r, c in zip(self._rotations, coeffs)]
        half = [(r, c * self.dt / 2) for r, c in zip(self._rotations, coeffs)]
        if not half:
            return []
        # symmetric: forward half-steps then backward, middle term merged
        mid_r, mid_a = half[-1]
        return half[:-1] + [(mid_r, 2 * mid_a)] + half[-2::-1]

    def apply_array(self, amps: np.ndarray, steps: int | None = None) -> np.ndarray:
        seq = self._sequence()
        for _ in range(self.n_steps if steps is None else steps):
            for rot, angle in seq:
                amps = rot.apply(amps, angle)
        return amps

    def apply(self, state: StateVector) -> StateVector:
        if state.n_qubits != self.n_qubits:
            raise DomainError("plan and state act on different register sizes")
        return StateVector(state.n_qubits, self.apply_array(state.amplitudes))

    def step_matrix(self) -> np.ndarray:
        """Dense unitary of a single step."""
        dim = 2**self.n_qubits
        # rows of the identity are basis vectors; applying to rows gives U^T
        return self.apply_array(np.eye(dim, dtype=complex), steps=1).T

    def unitary(self) -> np.ndarray:
        return np.linalg.matrix_power(self.step_matrix(), self.n_steps)

    def circuit(self) -> list[Gate]:
        """Elementary gates for the whole evolution (identity-term phases omitted)."""
        gates: list[Gate] = []
        step = [g for rot, angle in self._sequence() for g in pauli_exponential_circuit(rot.letters, angle)]
        for _ in range(self.n_steps):
            gates += step
        return gates

    def global_phase(self) -> complex:
        """Phase carried by identity terms, which :meth:`circuit` leaves out."""
        return complex(np.prod([np.exp(-1j * a) for r, a in self._sequence() if r.identity] or [1.0]) ** self.n_steps)


def trotter_circuit(h: PauliSum, t: float, n_steps: int, order: int = 1) -> TrotterPlan:
    """Plan ``exp(-i h t)`` as ``n_steps`` first- or second-order product steps."""
    if not np.isfinite(t):
        raise DomainError("evolution time must be finite")
    if n_steps < 1:
        raise DomainError("n_steps must be at least 1")
    if order not in (1, 2):
        raise DomainError("order must be 1 or 2")
    h = h.real()
    terms = h.terms
    plan = TrotterPlan(terms, t / n_steps, int(n_steps), order, h.n_qubits)
    plan._rotations = [_Rotation(term.letters, 2**h.n_qubits) for term in terms]
    return plan


def evolve(state: StateVector, h: PauliSum, t: float, n_steps: int, order: int = 2) -> StateVector:
    return trotter_circuit(h, t, n_steps, order).apply(state)
