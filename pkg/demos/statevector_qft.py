"""
Gates, measurement and the quantum Fourier transform
====================================================

Prepares a Bell pair, samples it, then checks the gate-level QFT against
the discrete Fourier transform matrix and counts its gates.
"""

import numpy as np

from qchemsim.statevector import (
    apply_circuit,
    apply_qft,
    cnot,
    hadamard,
    new_basis_state,
    qft_circuit,
    sample,
)


def bell_pair():
    state = apply_circuit(new_basis_state(2), [hadamard(0), cnot(0, 1)])
    print("Bell amplitudes:", np.round(state.amplitudes, 6))
    counts = np.bincount(sample(state, [0, 1], shots=2000, rng=1), minlength=4)
    print("2000 shots over |00>, |01>, |10>, |11>:", counts)


def qft_against_dft(m=4):
    size = 2**m
    columns = [apply_qft(new_basis_state(m, x)).amplitudes for x in range(size)]
    via_gates = np.stack(columns, axis=1)
    k, x = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    dft = np.exp(2j * np.pi * k * x / size) / np.sqrt(size)
    print(f"{m}-qubit QFT vs DFT matrix, max deviation {np.abs(via_gates - dft).max():.2e}")
    print(f"gate count {len(qft_circuit(range(m)))}")


if __name__ == "__main__":
    bell_pair()
    qft_against_dft()
