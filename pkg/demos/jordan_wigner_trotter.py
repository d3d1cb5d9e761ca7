"""
From integrals to qubits, and Trotterized time evolution
========================================================

Maps the H2 integrals to a Pauli sum, shows that the electron number is a
good quantum number, and measures how the product-formula error falls as
the step count grows at first and second order.
"""

from pathlib import Path

import numpy as np
from scipy.linalg import expm

from qchemsim.fermion import assemble_hamiltonian, number_operator
from qchemsim.integrals import parse_integrals
from qchemsim.pauli import dense_matrix
from qchemsim.spectrum import prepare_fock
from qchemsim.trotter import evolve

DATA = Path(__file__).parent / "data"


def main():
    ham = parse_integrals((DATA / "h2_r1.4.txt").read_text())
    h = assemble_hamiltonian(ham)
    print(f"{len(h)} Pauli terms on {h.n_qubits} qubits")
    for term in sorted(h.terms, key=lambda t: -abs(t.coefficient))[:6]:
        print(f"  {term.letters}  {term.coefficient.real:+.6f}")

    m = dense_matrix(h)
    n = dense_matrix(number_operator(4))
    print(f"||[H, N]|| = {np.abs(m @ n - n @ m).max():.1e}")

    psi = prepare_fock("1100")
    exact = expm(-1j * m * 2.0) @ psi.amplitudes
    print("steps   order-1 error   order-2 error")
    for steps in (4, 8, 16, 32, 64):
        errs = [np.linalg.norm(evolve(psi, h, 2.0, steps, order).amplitudes - exact) for order in (1, 2)]
        print(f"{steps:5d}   {errs[0]:.3e}       {errs[1]:.3e}")


if __name__ == "__main__":
    main()
