"""Shared comparisons between package results and dense oracles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qchemsim.pauli import PauliSum, dense_matrix
from qchemsim.spectrum import EnergyWindow, PhaseUnitary, phase_estimation
from qchemsim.statevector import StateVector


def random_pauli_sum(n: int, n_terms: int, rng: np.random.Generator) -> PauliSum:
    letters = ["".join(rng.choice(list("IXYZ"), n)) for _ in range(n_terms)]
    return PauliSum(n, {l: rng.uniform(-1, 1) for l in letters})


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(n, v / np.linalg.norm(v))


@dataclass
class PeaComparison:
    energy_errors: list[float]
    weight_errors: list[float]
    resolution: float

    @property
    def max_energy_error(self) -> float:
        return max(self.energy_errors, default=0.0)

    @property
    def max_weight_error(self) -> float:
        return max(self.weight_errors, default=0.0)


def compare_pea(h: PauliSum, psi: StateVector, unitary: PhaseUnitary, n_bits: int, shots: int,
                rng, min_weight: float = 0.05) -> PeaComparison:
    """Run sampled phase estimation and score it against dense diagonalization.

    Eigenvalues closer than one readout bin are merged into a group. Each
    sampled outcome is credited to the group with the cyclically nearest
    phase. For groups with oracle weight ``|c_k|^2 >= min_weight`` the
    modal outcome of the group's region must sit within one bin of the group
    energy, and the credited frequency is compared with the oracle weight.
    """
    window: EnergyWindow = unitary.window
    vals, vecs = np.linalg.eigh(dense_matrix(h))
    c2 = np.abs(vecs.conj().T @ psi.amplitudes) ** 2
    size = 2**n_bits
    phases = window.phase(vals)

    groups: list[list[int]] = []
    for k in np.argsort(phases):
        if groups and phases[k] - phases[groups[-1][-1]] < 1 / size:
            groups[-1].append(k)
        else:
            groups.append([k])
    centers = np.array([np.average(phases[g], weights=c2[g] + 1e-300) for g in groups])
    weights = np.array([c2[g].sum() for g in groups])

    res = phase_estimation(unitary, psi, n_bits, shots=shots, rng=rng)
    outcome_phase = np.arange(size) / size
    dist = np.abs(outcome_phase[:, None] - centers[None, :])
    dist = np.minimum(dist, 1 - dist)
    owner = np.argmin(dist, axis=1)
    hist = np.bincount(res.outcomes, minlength=size) / shots

    energy_errors, weight_errors = [], []
    for gi, w in enumerate(weights):
        region = np.flatnonzero(owner == gi)
        credited = hist[region].sum()
        if w >= min_weight:
            weight_errors.append(abs(credited - w))
            mode = region[np.argmax(hist[region])]
            d = abs(mode / size - centers[gi])
            energy_errors.append(min(d, 1 - d) * window.width)
    return PeaComparison(energy_errors, weight_errors, window.width / size)
