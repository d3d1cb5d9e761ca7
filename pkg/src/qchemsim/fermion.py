"""Second-quantized electronic Hamiltonians and the Jordan-Wigner map.

Mode ``i`` (1-based, as in the integral files) is stored on qubit ``i - 1``.
A qubit in ``|1>`` means the spin-orbital is occupied, and the creation
operator's image is ``sigma^- = |1><0| = (X - iY)/2`` followed by a ``Z`` on
every higher qubit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .pauli import PauliSum

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class SecondQuantizedHamiltonian:
    """One- and two-electron integrals over ``M`` spin-orbitals (Hartree).

    ``h2[p, q, r, s]`` multiplies ``a+_p a+_q a_r a_s`` with the overall 1/2
    prefactor; indices here are 0-based.
    """

    h1: np.ndarray
    h2: np.ndarray
    constant: float = 0.0

    def __post_init__(self):
        h1 = np.asarray(self.h1, dtype=float)
        m = h1.shape[0] if h1.ndim == 2 else -1
        h2 = np.zeros((m,) * 4) if self.h2 is None else np.asarray(self.h2, dtype=float)
        if h1.shape != (m, m) or h2.shape != (m,) * 4:
            raise DomainError(f"integral shapes {h1.shape} and {h2.shape} are inconsistent")
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "h2", h2)

    @classmethod
    def zeros(cls, n_modes: int) -> "SecondQuantizedHamiltonian":
        return cls(np.zeros((n_modes, n_modes)), np.zeros((n_modes,) * 4))

    @property
    def n_modes(self) -> int:
        return self.h1.shape[0]

    def check_hermitian(self, tol: float = HERMITIAN_TOL) -> None:
        """Raise DomainError unless h1 is symmetric and h2[p,q,r,s] == h2[s,r,q,p]."""
        d1 = np.max(np.abs(self.h1 - self.h1.T), initial=0.0)
        if d1 > tol:
            raise DomainError(f"one-electron integrals are not symmetric (max deviation {d1:.3g})")
        d2 = np.max(np.abs(self.h2 - self.h2.transpose(3, 2, 1, 0)), initial=0.0)
        if d2 > tol:
            raise DomainError(f"two-electron integrals are not Hermitian (max deviation {d2:.3g})")


@lru_cache(maxsize=64)
def _ladder(mode: int, n_modes: int, dagger: bool) -> PauliSum:
    q = mode - 1
    before = "I" * q
    after = "Z" * (n_modes - mode)
    # sigma^- = (X - iY)/2 creates, sigma^+ = (X + iY)/2 annihilates
    sign = -1 if dagger else 1
    return PauliSum(n_modes, {before + "X" + after: 0.5, before + "Y" + after: 0.5j * sign})


def jordan_wigner(mode: int, n_modes: int, dagger: bool = True) -> PauliSum:
    """Qubit image of ``a+_mode`` (``dagger=True``) or ``a_mode``; ``mode`` is 1-based."""
    if not 1 <= mode <= n_modes:
        raise DomainError(f"mode {mode} outside 1..{n_modes}")
    return _ladder(mode, n_modes, bool(dagger))


def creation(mode: int, n_modes: int) -> PauliSum:
    return jordan_wigner(mode, n_modes, True)


def annihilation(mode: int, n_modes: int) -> PauliSum:
    return jordan_wigner(mode, n_modes, False)


def number_operator(n_modes: int, modes=None) -> PauliSum:
    """Total (or partial) occupation number, ``sum_i (I - Z_i)/2``."""
    modes = range(1, n_modes + 1) if modes is None else modes
    out = PauliSum(n_modes)
    for i in modes:
        out = out + creation(i, n_modes) * annihilation(i, n_modes)
    return out


def assemble_hamiltonian(ham: SecondQuantizedHamiltonian, tol: float = 1e-14) -> PauliSum:
    """Jordan-Wigner image of ``sum h_pq a+_p a_q + 1/2 sum h_pqrs a+_p a+_q a_r a_s + constant``.

    Raises DomainError if the integrals do not define a Hermitian operator.
    """
    ham.check_hermitian()
    m = ham.n_modes
    acc: dict[str, complex] = {}

    def add(op: PauliSum, scale: float):
        for t in op.terms:
            acc[t.letters] = acc.get(t.letters, 0) + scale * t.coefficient

    cre = [creation(i + 1, m) for i in range(m)]
    ann = [annihilation(i + 1, m) for i in range(m)]
    for p, q in zip(*np.nonzero(ham.h1)):
        add(cre[p] * ann[q], ham.h1[p, q])
    pairs_cc: dict[tuple[int, int], PauliSum] = {}
    pairs_aa: dict[tuple[int, int], PauliSum] = {}
    for p, q, r, s in zip(*np.nonzero(ham.h2)):
        if p == q or r == s:
            continue  # a+_p a+_p = 0
        cc = pairs_cc.get((p, q))
        if cc is None:
            cc = pairs_cc[(p, q)] = cre[p] * cre[q]
        aa = pairs_aa.get((r, s))
        if aa is None:
            aa = pairs_aa[(r, s)] = ann[r] * ann[s]
        add(cc * aa, 0.5 * ham.h2[p, q, r, s])
    if ham.constant:
        ident = "I" * m
        acc[ident] = acc.get(ident, 0) + ham.constant
    return PauliSum(m, acc, tol=tol).real(HERMITIAN_TOL)
