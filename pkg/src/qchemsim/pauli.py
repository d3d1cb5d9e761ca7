"""Pauli strings and sums of Pauli strings.

A Pauli string is stored as a letter string over ``IXYZ`` where ``letters[q]``
acts on qubit ``q``. Qubit 0 is the least significant bit of a basis index,
the same convention the statevector uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError, ResourceError

DENSE_QUBIT_CAP = 12

_PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (a, b) -> (phase, letter) with a @ b = phase * letter
_PRODUCT = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


def _masks(letters: str) -> tuple[int, int, int]:
    """Bit masks (x, z, n_y) with Y counted in both x and z."""
    x = z = 0
    ny = 0
    for q, c in enumerate(letters):
        if c in "XY":
            x |= 1 << q
        if c in "ZY":
            z |= 1 << q
        if c == "Y":
            ny += 1
    return x, z, ny


def parity(values: np.ndarray) -> np.ndarray:
    """Bit parity of each non-negative integer in ``values`` (0 or 1)."""
    return (np.bitwise_count(np.asarray(values, dtype=np.int64)) & 1).astype(np.int64)


@dataclass(frozen=True)
class PauliTerm:
    coefficient: complex
    letters: str

    def __post_init__(self):
        if set(self.letters) - set("IXYZ"):
            raise DomainError(f"invalid Pauli letters {self.letters!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, c in enumerate(self.letters) if c != "I")

    def is_diagonal(self) -> bool:
        return set(self.letters) <= {"I", "Z"}

    def __mul__(self, other: "PauliTerm") -> "PauliTerm":
        if len(self.letters) != len(other.letters):
            raise DomainError("Pauli strings act on different register sizes")
        phase = 1 + 0j
        out = []
        for a, b in zip(self.letters, other.letters):
            p, c = _PRODUCT[(a, b)]
            phase *= p
            out.append(c)
        return PauliTerm(self.coefficient * other.coefficient * phase, "".join(out))

    def apply(self, amps: np.ndarray) -> np.ndarray:
        """Return ``P @ amps`` for the (unscaled) string times its coefficient."""
        return self.coefficient * apply_pauli_string(self.letters, amps)


def apply_pauli_string(letters: str, amps: np.ndarray) -> np.ndarray:
    """Apply the bare Pauli string (coefficient 1) to a length-2^n vector."""
    x, z, ny = _masks(letters)
    idx = np.arange(amps.shape[-1], dtype=np.int64)
    sign = 1 - 2 * parity(idx & z)
    out = np.empty_like(amps, dtype=complex)
    out[..., idx ^ x] = (1j**ny) * sign * amps
    return out


class PauliSum:
    """Sum of Pauli strings on a fixed register size.

    Terms are collected on construction: equal letter strings are merged and
    coefficients smaller than ``tol`` in magnitude are dropped.
    """

    def __init__(self, n_qubits: int, terms: Iterable[PauliTerm] | Mapping[str, complex] = (),
                 tol: float = 1e-14):
        self.n_qubits = int(n_qubits)
        acc: dict[str, complex] = {}
        items = terms.items() if isinstance(terms, Mapping) else ((t.letters, t.coefficient) for t in terms)
        for letters, coeff in items:
            if len(letters) != self.n_qubits:
                raise DomainError(f"term {letters!r} does not match {self.n_qubits} qubits")
            if set(letters) - set("IXYZ"):
                raise DomainError(f"invalid Pauli letters {letters!r}")
            acc[letters] = acc.get(letters, 0) + complex(coeff)
        self._terms = {k: v for k, v in sorted(acc.items()) if abs(v) > tol}

    @classmethod
    def from_label(cls, label: str, coefficient: complex = 1.0) -> "PauliSum":
        return cls(len(label), {label: coefficient})

    @classmethod
    def identity(cls, n_qubits: int, coefficient: complex = 1.0) -> "PauliSum":
        return cls(n_qubits, {"I" * n_qubits: coefficient})

    @property
    def terms(self) -> list[PauliTerm]:
        """Terms in lexicographic order of their letter strings."""
        return [PauliTerm(c, k) for k, c in self._terms.items()]

    def coefficient(self, letters: str) -> complex:
        return self._terms.get(letters, 0j)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self.terms)

    def __repr__(self) -> str:
        body = " + ".join(f"({c:.6g})*{k}" for k, c in self._terms.items()) or "0"
        return f"PauliSum({self.n_qubits}, {body})"

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if isinstance(other, (int, float, complex)):
            other = PauliSum.identity(self.n_qubits, other)
        self._check(other)
        merged = dict(self._terms)
        for k, c in other._terms.items():
            merged[k] = merged.get(k, 0) + c
        return PauliSum(self.n_qubits, merged)

    __radd__ = __add__

    def __neg__(self) -> "PauliSum":
        return self * -1

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-other)

    def __mul__(self, other) -> "PauliSum":
        if isinstance(other, PauliSum):
            self._check(other)
            out: dict[str, complex] = {}
            for a in self.terms:
                for b in other.terms:
                    p = a * b
                    out[p.letters] = out.get(p.letters, 0) + p.coefficient
            return PauliSum(self.n_qubits, out)
        return PauliSum(self.n_qubits, {k: c * other for k, c in self._terms.items()})

    __rmul__ = __mul__

    def dagger(self) -> "PauliSum":
        return PauliSum(self.n_qubits, {k: np.conj(c) for k, c in self._terms.items()})

    def _check(self, other: "PauliSum"):
        if other.n_qubits != self.n_qubits:
            raise DomainError("Pauli sums act on different register sizes")

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(c.imag) <= tol for c in self._terms.values())

    def real(self, tol: float = 1e-12) -> "PauliSum":
        """Drop imaginary parts after checking they are below ``tol``."""
        if not self.is_hermitian(tol):
            worst = max(abs(c.imag) for c in self._terms.values())
            raise DomainError(f"Pauli sum is not Hermitian (max imaginary coefficient {worst:.3g})")
        return PauliSum(self.n_qubits, {k: c.real for k, c in self._terms.items()})

    def is_diagonal(self) -> bool:
        return all(set(k) <= {"I", "Z"} for k in self._terms)

    def identity_coefficient(self) -> complex:
        return self._terms.get("I" * self.n_qubits, 0j)

    def norm_bound(self) -> float:
        """Sum of absolute non-identity coefficients; bounds the spectral radius about the identity shift."""
        ident = "I" * self.n_qubits
        return float(sum(abs(c) for k, c in self._terms.items() if k != ident))

    def apply(self, amps: np.ndarray) -> np.ndarray:
        out = np.zeros(amps.shape, dtype=complex)
        for k, c in self._terms.items():
            out += c * apply_pauli_string(k, amps)
        return out

    def diagonal(self) -> np.ndarray:
        """Diagonal of a Z-only sum as a length-2^n array."""
        if not self.is_diagonal():
            raise DomainError("Pauli sum has off-diagonal terms")
        idx = np.arange(2**self.n_qubits, dtype=np.int64)
        out = np.zeros(idx.shape, dtype=complex)
        for k, c in self._terms.items():
            _, z, _ = _masks(k)
            out += c * (1 - 2 * parity(idx & z))
        return out


def dense_matrix(h: PauliSum, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
    """Build the 2^n x 2^n matrix of ``h`` from Kronecker products.

    Raises ResourceError above ``cap`` qubits.
    """
    n = h.n_qubits
    if n > cap:
        raise ResourceError(f"{n} qubits exceeds the dense-matrix cap of {cap}")
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    for term in h.terms:
        m = np.ones((1, 1), dtype=complex)
        # highest qubit leftmost in the Kronecker product
        for c in reversed(term.letters):
            m = np.kron(m, _PAULI_MATRICES[c])
        out += term.coefficient * m
    return out
