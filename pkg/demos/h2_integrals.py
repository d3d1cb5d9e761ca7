"""
Minimal-basis H2 integrals from scratch
=======================================

Builds STO-3G integrals for H2 at a given bond length with the closed-form
s-type Gaussian formulas, transforms them to the two symmetry-adapted
molecular orbitals, and writes the spin-orbital integrals file that the
``pea`` pipeline reads.

Run ``python3 demos/h2_integrals.py`` to regenerate ``demos/data/``.
"""

from pathlib import Path

import numpy as np
from scipy.special import erf

from qchemsim.fermion import SecondQuantizedHamiltonian
from qchemsim.integrals import write_integrals

# STO-3G contraction of a 1s Slater function, zeta = 1.24 for hydrogen
ZETA = 1.24
ALPHA = np.array([0.109818, 0.405771, 2.22766]) * ZETA**2
COEF = np.array([0.444635, 0.535328, 0.154329]) * (2 * ALPHA / np.pi) ** 0.75


def boys0(t):
    t = np.asarray(t, dtype=float)
    small = t < 1e-8
    safe = np.where(small, 1.0, t)
    return np.where(small, 1 - t / 3, 0.5 * np.sqrt(np.pi / safe) * erf(np.sqrt(safe)))


def ao_integrals(r):
    """Overlap, core Hamiltonian and (ij|kl) over the two 1s functions at distance ``r`` (bohr)."""
    centers = np.array([0.0, r])
    a = ALPHA[:, None]
    b = ALPHA[None, :]
    cc = COEF[:, None] * COEF[None, :]
    s = np.zeros((2, 2))
    hcore = np.zeros((2, 2))
    for i in range(2):
        for j in range(2):
            rab2 = (centers[i] - centers[j]) ** 2
            p = a + b
            pre = np.exp(-a * b * rab2 / p)
            s[i, j] = np.sum(cc * (np.pi / p) ** 1.5 * pre)
            kin = a * b / p * (3 - 2 * a * b * rab2 / p) * (np.pi / p) ** 1.5 * pre
            rp = (a * centers[i] + b * centers[j]) / p
            pot = sum(-2 * np.pi / p * boys0(p * (rp - c) ** 2) * pre for c in centers)
            hcore[i, j] = np.sum(cc * (kin + pot))
    eri = np.zeros((2, 2, 2, 2))
    for i, j, k, l in np.ndindex(2, 2, 2, 2):
        total = 0.0
        for pa, ca in zip(ALPHA, COEF):
            for pb, cb in zip(ALPHA, COEF):
                p = pa + pb
                rp = (pa * centers[i] + pb * centers[j]) / p
                eab = np.exp(-pa * pb * (centers[i] - centers[j]) ** 2 / p)
                for pc, c3 in zip(ALPHA, COEF):
                    for pd, c4 in zip(ALPHA, COEF):
                        q = pc + pd
                        rq = (pc * centers[k] + pd * centers[l]) / q
                        ecd = np.exp(-pc * pd * (centers[k] - centers[l]) ** 2 / q)
                        val = 2 * np.pi**2.5 / (p * q * np.sqrt(p + q))
                        val *= boys0(p * q * (rp - rq) ** 2 / (p + q)) * eab * ecd
                        total += ca * cb * c3 * c4 * val
        eri[i, j, k, l] = total
    return s, hcore, eri


def h2_hamiltonian(r):
    """Spin-orbital Hamiltonian; modes 1,2 are the bonding orbital (up, down), 3,4 antibonding."""
    s, hcore, eri = ao_integrals(r)
    s12 = s[0, 1]
    c = np.array([[1, 1], [1, -1]]) / np.sqrt([2 * (1 + s12), 2 * (1 - s12)])
    h_mo = c.T @ hcore @ c
    eri_mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", c, c, c, c, eri)
    spatial = np.array([0, 0, 1, 1])
    spin = np.array([0, 1, 0, 1])
    same = spin[:, None] == spin[None, :]
    h1 = h_mo[np.ix_(spatial, spatial)] * same
    # coefficient of a+_p a+_q a_r a_s is <pq|sr> = (ps|qr)
    chem = eri_mo[np.ix_(spatial, spatial, spatial, spatial)]
    h2 = np.einsum("psqr->pqrs", chem)
    # p and s share a spin, as do q and r
    h2 *= same[:, None, None, :] * same[None, :, :, None]
    return SecondQuantizedHamiltonian(h1, h2, 1.0 / r)


if __name__ == "__main__":
    out = Path(__file__).parent / "data"
    out.mkdir(exist_ok=True)
    for r in (0.8, 1.0, 1.2, 1.4, 1.6, 2.0, 2.5, 3.0):
        path = out / f"h2_r{r:.1f}.txt"
        path.write_text(f"# H2 STO-3G, R = {r} bohr\n" + write_integrals(h2_hamiltonian(r)))
        print("wrote", path)
