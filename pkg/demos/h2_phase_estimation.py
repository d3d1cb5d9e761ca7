"""
H2 potential energy curve by phase estimation
=============================================

For each bond length in ``demos/data`` the Hartree-Fock reference
``|1100>`` is fed to iterative phase estimation with 20 readout bits. The
readout is compared with exact diagonalization in the two-electron sector.

The same sweep runs from the command line::

    qchemsim pea --config demos/data/h2_sweep.cfg
"""

import re
from pathlib import Path

import numpy as np

from qchemsim.fermion import assemble_hamiltonian, number_operator
from qchemsim.integrals import parse_integrals
from qchemsim.pauli import dense_matrix
from qchemsim.spectrum import ExactUnitary, iterative_pea, prepare_fock

DATA = Path(__file__).parent / "data"


def sector_ground(h):
    n = np.diag(dense_matrix(number_operator(h.n_qubits))).real
    keep = np.flatnonzero(np.isclose(n, 2))
    m = dense_matrix(h)[np.ix_(keep, keep)]
    return np.linalg.eigvalsh(m)[0]


def main():
    files = sorted(DATA.glob("h2_r*.txt"), key=lambda p: float(re.findall(r"[\d.]+\d", p.stem)[0]))
    print(" R/bohr     PEA energy      exact energy    |diff|")
    for path in files:
        r = float(re.findall(r"[\d.]+\d", path.stem)[0])
        h = assemble_hamiltonian(parse_integrals(path.read_text()))
        u = ExactUnitary(h)
        res = iterative_pea(u, prepare_fock("1100"), 20, rng=0)
        exact = sector_ground(h)
        print(f"{r:6.2f}   {res.energy:14.8f}  {exact:14.8f}   {abs(res.energy - exact):.1e}")
    print(f"(one readout bin is the window width times 2^-20, about {u.window.width * 2**-20:.1e} Hartree)")


if __name__ == "__main__":
    main()
