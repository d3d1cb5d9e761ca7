"""
Thermal encodings and adiabatic state preparation
=================================================

A coherent thermal state whose half-register is the Gibbs ensemble of a
small spectrum, followed by adiabatic preparation of a two-qubit ground
state at several run times.
"""

import numpy as np

from qchemsim.pauli import PauliSum
from qchemsim.spectrum import CetsSpec, adiabatic_state_prep, prepare_cets, reduced_density_matrix


def thermal():
    energies = (0.0, 0.4, 1.1, 2.0)
    for beta in (0.0, 1.0, 5.0, np.inf):
        spec = CetsSpec(energies, beta)
        rho = reduced_density_matrix(prepare_cets(spec), 2)
        print(f"beta={beta}: populations {np.round(np.diag(rho).real, 6)}")


def adiabatic():
    start = PauliSum(2, {"XI": -1.0, "IX": -1.0})
    target = PauliSum(2, {"ZZ": 1.0, "ZI": -0.5, "IX": 0.3})
    for t_run in (0.01, 1.0, 5.0, 25.0):
        res = adiabatic_state_prep(start, target, t_run, dt=0.01)
        print(f"t_run={t_run:6.2f}  ground-state fidelity {res.fidelity:.5f}  "
              f"(initial overlap {res.initial_overlap:.5f})")


if __name__ == "__main__":
    thermal()
    adiabatic()
