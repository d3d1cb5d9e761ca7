"""
Wavepackets on a qubit grid
===========================

Split-operator propagation with the kinetic step done through the quantum
Fourier transform: a free packet spreading, a coherent state in a harmonic
well, and two repelling charges.
"""

import math

import numpy as np

from qchemsim.grid import GridSpec, ParticleSet, coulomb_potential, harmonic_potential, init_gaussian, propagate


def width(wfn, particle=0):
    prob = np.abs(wfn.amplitudes) ** 2
    x = wfn.positions()[particle, 0]
    return math.sqrt(prob @ (x - prob @ x) ** 2)


def free_packet():
    w = init_gaussian(GridSpec.uniform(8, -40, 40), 0.0, 1.0)
    for t in (1.0, 2.0, 5.0):
        out, _ = propagate(w, None, t, 0.05)
        analytic = math.sqrt(1 + (t / 2) ** 2)
        print(f"free packet t={t}: width {width(out):.6f}, analytic {analytic:.6f}")


def coherent_state():
    w = init_gaussian(GridSpec.uniform(8, -10, 10), 2.0, 1 / math.sqrt(2))
    final, trace = propagate(w, harmonic_potential(1.0), 2 * math.pi, 2 * math.pi / 200, record_every=50)
    for row in trace.rows:
        print(f"t={row.time:5.3f}  <x>={row.mean_x[0, 0]:+.4f}  <p>={row.mean_p[0, 0]:+.4f}  E={row.energy:.6f}")
    print(f"fidelity after one period {final.fidelity(w):.6f}")


def two_charges():
    parts = ParticleSet([1.0, 1.0], [1.0, 1.0])
    w = init_gaussian(GridSpec.uniform(6, -16, 16), [[-1.5], [1.5]], 1.0, particles=parts)
    _, trace = propagate(w, coulomb_potential(parts), 3.0, 0.02, record_every=50)
    for row in trace.rows:
        print(f"t={row.time:4.2f}  separation {row.mean_x[1, 0] - row.mean_x[0, 0]:.4f}")


if __name__ == "__main__":
    free_packet()
    coherent_state()
    two_charges()
