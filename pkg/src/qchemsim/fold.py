"""Lattice folding as binary optimization, and adiabatic search for its ground state.

Binary variables ``q`` and Ising spins ``s`` are related by ``q = (1 - s)/2``.
On the qubit register variable ``i`` lives on qubit ``i`` and the bit value
equals ``q_i``, so ``|0>`` is ``s = +1`` and ``|1>`` is ``s = -1``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, ParseError, ResourceError
from .pauli import PauliSum
from .statevector import StateVector, apply_single_qubit, uniform_state

ENUMERATION_CAP = 24

# --------------------------------------------------------------------------
# problems


@dataclass(frozen=True)
class QuboProblem:
    """Ising problem ``E(s) = -sum h_i s_i + sum_{i<j} J_ij s_i s_j``.

    ``scale`` and ``offset`` record how the bounded problem relates to the
    unscaled one it came from: ``original = scale * E(s) + offset``.
    """

    h: np.ndarray
    J: np.ndarray
    scale: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float).reshape(-1)
        n = h.size
        J = np.zeros((n, n)) if self.J is None else np.asarray(self.J, dtype=float)
        if J.shape != (n, n):
            raise DomainError(f"J must be {n}x{n}")
        if np.any(np.tril(J) != 0):
            raise DomainError("J must be strictly upper triangular")
        if np.max(np.abs(h), initial=0) > 1 + 1e-12 or np.max(np.abs(J), initial=0) > 1 + 1e-12:
            raise DomainError("|h_i| and |J_ij| must not exceed 1; use QuboProblem.rescaled")
        if not self.scale > 0:
            raise DomainError("scale must be positive")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "J", J)

    @classmethod
    def rescaled(cls, h, J, offset: float = 0.0) -> "QuboProblem":
        """Divide ``h`` and ``J`` by their largest magnitude and record the factor."""
        h = np.asarray(h, dtype=float)
        J = np.triu(np.asarray(J, dtype=float), 1)
        peak = max(np.max(np.abs(h), initial=0), np.max(np.abs(J), initial=0))
        scale = peak if peak > 0 else 1.0
        return cls(h / scale, J / scale, scale, offset)

    @property
    def n(self) -> int:
        return self.h.size

    def original_energy(self, s) -> float:
        return self.scale * qubo_energy(self, s) + self.offset


def qubo_energy(p: QuboProblem, s) -> float:
    s = np.asarray(s, dtype=float)
    if s.shape != (p.n,):
        raise DomainError(f"assignment must have length {p.n}")
    if np.any(np.abs(s) != 1):
        raise DomainError("spins must be +1 or -1")
    return float(-p.h @ s + s @ p.J @ s)


def _key(variables: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(int(v) for v in variables)))


class PuboProblem:
    """Polynomial over binary variables, stored as ``{sorted variable tuple: coefficient}``.

    ``q_i**2 = q_i`` is applied on construction, so repeated indices collapse
    and equal subsets are merged. The empty tuple holds the constant.
    """

    def __init__(self, n_vars: int, terms: Mapping[Sequence[int], float] | Iterable[tuple[Sequence[int], float]]):
        self.n_vars = int(n_vars)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, ...], float] = {}
        for vars_, c in items:
            k = _key(vars_)
            if any(not 0 <= v < self.n_vars for v in k):
                raise DomainError(f"term {k} refers to variables outside 0..{self.n_vars - 1}")
            acc[k] = acc.get(k, 0.0) + float(c)
        self.terms = {k: c for k, c in sorted(acc.items(), key=lambda kv: (len(kv[0]), kv[0])) if c != 0}

    @property
    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    @property
    def constant(self) -> float:
        return self.terms.get((), 0.0)

    def energy(self, q) -> float:
        q = np.asarray(q, dtype=int)
        if q.shape != (self.n_vars,) or np.any((q != 0) & (q != 1)):
            raise DomainError(f"assignment must be {self.n_vars} bits")
        return float(sum(c * np.prod(q[list(k)]) for k, c in self.terms.items()))

    def energies(self, bits: np.ndarray) -> np.ndarray:
        """Vectorised energies for rows of a ``(count, n_vars)`` 0/1 array."""
        out = np.zeros(bits.shape[0])
        for k, c in self.terms.items():
            if k:
                out += c * np.prod(bits[:, list(k)], axis=1)
            else:
                out += c
        return out

    def __repr__(self) -> str:
        return f"PuboProblem({self.n_vars}, {self.terms})"


# The four-bead peptide with chaperone; q1..q4 are variables 0..3.
FOLD_PUBO = PuboProblem(4, {
    (): 4, (0,): -3, (1,): 4, (0, 1): -4, (2,): -1, (0, 2): 1, (1, 2): -2, (3,): 4,
    (0, 3): -2, (1, 3): -8, (0, 1, 3): 5, (2, 3): -2, (1, 2, 3): 5, (0, 1, 2, 3): -1,
})


def fold_energy(q) -> float:
    """Free energy of the chaperone-assisted four-bead fold for bits ``(q1, q2, q3, q4)``."""
    return FOLD_PUBO.energy(q)


# --------------------------------------------------------------------------
# turn encoding

DIRECTION_BITS = {"up": "11", "down": "00", "left": "10", "right": "01"}
BITS_DIRECTION = {v: k for k, v in DIRECTION_BITS.items()}
STEP = {"up": (0, 1), "down": (0, -1), "left": (-1, 0), "right": (1, 0)}


@dataclass(frozen=True)
class FoldEncoding:
    """Bond-direction bits of an ``n_aminos``-bead chain; the first bond is fixed to right."""

    n_aminos: int

    @property
    def free_bits(self) -> int:
        return 2 * (self.n_aminos - 2)

    def bits(self, free: Sequence[int] | str) -> str:
        """Full bit string ``01 q1 q2 ...`` from the free bits."""
        s = "".join(str(int(b)) for b in free)
        if len(s) != self.free_bits:
            raise DomainError(f"expected {self.free_bits} free bits")
        return "01" + s

    def walk(self, free: Sequence[int] | str) -> list[tuple[int, int]]:
        return decode_fold(self.bits(free))


def encode_fold(directions: Sequence[str]) -> str:
    """Bond directions to bits, two per bond; the first bond must point right."""
    if not directions or directions[0] != "right":
        raise DomainError("the first bond is fixed to 'right'")
    try:
        return "".join(DIRECTION_BITS[d] for d in directions)
    except KeyError as exc:
        raise DomainError(f"unknown direction {exc.args[0]!r}") from None


def decode_directions(bits: str) -> list[str]:
    bits = bits.replace(" ", "")
    if len(bits) % 2 or set(bits) - {"0", "1"}:
        raise DomainError(f"bad bond bit string {bits!r}")
    return [BITS_DIRECTION[bits[i:i + 2]] for i in range(0, len(bits), 2)]


def decode_fold(bits: str) -> list[tuple[int, int]]:
    """Bead coordinates on the square lattice, first bead at the origin."""
    pos = [(0, 0)]
    for d in decode_directions(bits):
        dx, dy = STEP[d]
        x, y = pos[-1]
        pos.append((x + dx, y + dy))
    return pos


@dataclass(frozen=True)
class HpModel:
    """Hydrophobic-polar contact energies; ``sequence`` is a string over ``HP``."""

    sequence: str
    e_hh: float = -1.0
    e_hp: float = 0.0
    e_pp: float = 0.0

    def __post_init__(self):
        if set(self.sequence) - {"H", "P"}:
            raise DomainError("sequence must contain only H and P")

    def pair_energy(self, a: str, b: str) -> float:
        if a == b == "H":
            return self.e_hh
        if a == b == "P":
            return self.e_pp
        return self.e_hp


# Chaperone cells and sequence under which the walk model below reproduces
# every row of FOLD_PUBO exactly.
CHAPERONE_CELLS = ((1, -1), (2, -1), (2, 0))
FOLD_SEQUENCE = HpModel("HPPH")
CHAIN_OVERLAP_PENALTY = 2.0
CHAPERONE_PENALTY = 4.0


@dataclass(frozen=True)
class WalkEnergy:
    contact: float
    chain_overlaps: int
    chaperone_overlaps: int

    @property
    def total(self) -> float:
        return (self.contact + CHAIN_OVERLAP_PENALTY * self.chain_overlaps
                + CHAPERONE_PENALTY * self.chaperone_overlaps)


def walk_energy(coords: Sequence[tuple[int, int]], model: HpModel = FOLD_SEQUENCE,
                chaperone: Iterable[tuple[int, int]] = CHAPERONE_CELLS) -> WalkEnergy:
    """HP contacts between non-bonded lattice neighbours plus overlap counts.

    Contacts are counted between every pair more than one bond apart that sit
    on adjacent sites, whether or not the walk is self-avoiding.
    """
    if len(coords) != len(model.sequence):
        raise DomainError("walk length does not match the sequence")
    cells = set(chaperone)
    contact = 0.0
    overlaps = 0
    for i, j in combinations(range(len(coords)), 2):
        (xi, yi), (xj, yj) = coords[i], coords[j]
        d = abs(xi - xj) + abs(yi - yj)
        if d == 0:
            overlaps += 1
        elif d == 1 and j - i > 1:
            contact += model.pair_energy(model.sequence[i], model.sequence[j])
    on_chaperone = sum(1 for c in coords if c in cells)
    return WalkEnergy(contact, overlaps, on_chaperone)


def walk_model_discrepancies() -> list[tuple[tuple[int, ...], float, float]]:
    """Rows where the walk model disagrees with FOLD_PUBO: ``(q, fold, walk)``. Empty when consistent."""
    enc = FoldEncoding(4)
    bad = []
    for q in np.ndindex(2, 2, 2, 2):
        e = fold_energy(q)
        w = walk_energy(enc.walk(q)).total
        if e != w:
            bad.append((q, e, w))
    return bad


# --------------------------------------------------------------------------
# quartic -> quadratic


@dataclass
class Reduction:
    """Result of :func:`reduce_to_qubo`.

    ``quadratic`` is the degree-2 binary polynomial over the original
    variables followed by the ancillas; ``ancillas`` maps each ancilla index
    to the variable pair it stands for, and ``penalties`` to its penalty
    weight. ``qubo`` is the bounded Ising form.
    """

    original: PuboProblem
    quadratic: PuboProblem
    ancillas: dict[int, tuple[int, int]]
    penalties: dict[int, float]
    qubo: QuboProblem

    @property
    def n_original(self) -> int:
        return self.original.n_vars

    def complete(self, q: Sequence[int]) -> np.ndarray:
        """Extend an original assignment with penalty-consistent ancilla values."""
        full = list(int(b) for b in q)
        for anc in sorted(self.ancillas):
            a, b = self.ancillas[anc]
            full.append(full[a] * full[b])
        return np.array(full)


def _pick_pair(terms: Mapping[tuple[int, ...], float]) -> tuple[int, int]:
    counts: dict[tuple[int, int], int] = {}
    for k in terms:
        if len(k) > 2:
            for pair in combinations(k, 2):
                counts[pair] = counts.get(pair, 0) + 1
    return max(sorted(counts), key=lambda p: counts[p])


def pubo_to_ising(p: PuboProblem) -> tuple[np.ndarray, np.ndarray, float]:
    """Substitute ``q = (1 - s)/2`` into a quadratic binary polynomial; returns unscaled (h, J, constant)."""
    if p.degree > 2:
        raise DomainError("polynomial is not quadratic")
    n = p.n_vars
    h = np.zeros(n)
    J = np.zeros((n, n))
    const = 0.0
    for k, c in p.terms.items():
        if len(k) == 0:
            const += c
        elif len(k) == 1:
            # c (1 - s)/2  ->  -h s with h = c/2
            const += c / 2
            h[k[0]] += c / 2
        else:
            i, j = k
            const += c / 4
            h[i] += c / 4
            h[j] += c / 4
            J[i, j] += c / 4
    return h, J, const


def reduce_to_qubo(p: PuboProblem) -> Reduction:
    """Quadratize a degree-<=4 binary polynomial with product ancillas.

    The pair shared by the most cubic-or-higher terms is repeatedly replaced
    by a fresh ancilla ``y = q_a q_b``, enforced by the penalty
    ``w (q_a q_b - 2 q_a y - 2 q_b y + 3 y)`` which vanishes when ``y = q_a q_b``
    and is at least ``w`` otherwise. Weights are assigned after all
    substitutions, newest ancilla first: ``w = 1 + sum |c|`` over every other
    final term touching ``y``, including penalties of later ancillas. Fixing
    inconsistent ancillas oldest first then strictly lowers the energy, so
    every minimiser is consistent and minima agree.
    """
    if p.degree > 4:
        raise DomainError("only polynomials up to degree 4 are supported")
    terms = dict(p.terms)
    n = p.n_vars
    ancillas: dict[int, tuple[int, int]] = {}
    while any(len(k) > 2 for k in terms):
        a, b = _pick_pair(terms)
        y = n + len(ancillas)
        ancillas[y] = (a, b)
        new: dict[tuple[int, ...], float] = {}
        for k, c in terms.items():
            if len(k) > 2 and a in k and b in k:
                k = _key([v for v in k if v not in (a, b)] + [y])
            new[k] = new.get(k, 0.0) + c
        terms = new
    n_total = n + len(ancillas)

    penalties: dict[int, float] = {}
    penalty_terms: dict[int, dict[tuple[int, ...], float]] = {}
    for y in sorted(ancillas, reverse=True):
        a, b = ancillas[y]
        weight = 1.0 + sum(abs(c) for k, c in terms.items() if y in k)
        weight += sum(abs(c) for later in penalty_terms.values() for k, c in later.items() if y in k)
        penalties[y] = weight
        penalty_terms[y] = {_key([a, b]): weight, _key([a, y]): -2 * weight,
                            _key([b, y]): -2 * weight, (y,): 3 * weight}
    total = dict(terms)
    for pt in penalty_terms.values():
        for k, c in pt.items():
            total[k] = total.get(k, 0.0) + c
    quadratic = PuboProblem(n_total, total)
    h, J, const = pubo_to_ising(quadratic)
    return Reduction(p, quadratic, ancillas, penalties, QuboProblem.rescaled(h, J, const))


def quadratic_as_qubo(p: PuboProblem) -> QuboProblem:
    h, J, const = pubo_to_ising(p)
    return QuboProblem.rescaled(h, J, const)


# --------------------------------------------------------------------------
# final Hamiltonian and annealing


def build_final_hamiltonian(p: QuboProblem) -> PauliSum:
    """``-sum h_i Z_i + sum J_ij Z_i Z_j`` on ``p.n`` qubits."""
    n = p.n
    terms: dict[str, float] = {}
    for i in range(n):
        if p.h[i]:
            terms["I" * i + "Z" + "I" * (n - i - 1)] = -p.h[i]
    for i, j in zip(*np.nonzero(p.J)):
        letters = ["I"] * n
        letters[i] = letters[j] = "Z"
        terms["".join(letters)] = p.J[i, j]
    return PauliSum(n, terms)


def qubo_diagonal(p: QuboProblem) -> np.ndarray:
    """Ising energy of every basis state (bit ``i`` of the index is ``q_i``)."""
    idx = np.arange(2**p.n)
    s = 1 - 2 * ((idx[:, None] >> np.arange(p.n)) & 1)
    return -(s @ p.h) + np.einsum("ki,ij,kj->k", s, p.J, s)


@dataclass(frozen=True)
class AnnealSchedule:
    """Envelopes ``A(tau)``, ``B(tau)`` over ``tau = t / t_run``."""

    t_run: float
    A: Callable[[float], float] = field(default=lambda tau: 1.0 - tau)
    B: Callable[[float], float] = field(default=lambda tau: tau)
    dominance: float = 10.0

    def __post_init__(self):
        if not self.t_run > 0:
            raise DomainError("t_run must be positive")
        a0, b0, a1, b1 = self.A(0.0), self.B(0.0), self.A(1.0), self.B(1.0)
        if a0 < self.dominance * b0 or b1 < self.dominance * a1 or a0 <= 0 or b1 <= 0:
            raise DomainError(
                f"schedule endpoints A(0)={a0}, B(0)={b0}, A(1)={a1}, B(1)={b1} "
                f"violate the factor-{self.dominance} dominance requirement"
            )


@dataclass
class AnnealResult:
    state: StateVector
    success_probability: float
    n_steps: int
    minimizers: list[int]
    samples: np.ndarray | None = None


def anneal(p: QuboProblem, schedule: AnnealSchedule, dt: float, rng=None, shots: int = 0,
           minimizers: Sequence[int] | None = None) -> AnnealResult:
    """Evolve ``H(tau) = A(tau) (-sum X_i) + B(tau) H_f`` from the uniform superposition.

    Each step freezes the Hamiltonian at its midpoint and applies the
    symmetric split: half the diagonal ``H_f`` phase, the transverse-field
    rotation, the other half. ``success_probability`` is the Born weight on
    the exact minimiser set (enumerated unless given as basis indices).
    ``shots > 0`` additionally samples measurement outcomes with ``rng``.
    """
    if not dt > 0:
        raise DomainError("dt must be positive")
    n = p.n
    if n > ENUMERATION_CAP:
        raise ResourceError(f"{n} spins exceeds the cap of {ENUMERATION_CAP}")
    diag = qubo_diagonal(p)
    if minimizers is None:
        minimizers = np.flatnonzero(diag <= diag.min() + 1e-9 * max(1.0, abs(diag.min()))).tolist()
    n_steps = max(1, math.ceil(schedule.t_run / dt - 1e-9))
    step = schedule.t_run / n_steps
    amps = uniform_state(n).amplitudes
    for k in range(n_steps):
        tau = (k + 0.5) / n_steps
        a, b = schedule.A(tau), schedule.B(tau)
        half = np.exp(-0.5j * b * step * diag)
        amps = amps * half
        # exp(+i a dt X) on each qubit
        c, s = np.cos(a * step), np.sin(a * step)
        u = np.array([[c, 1j * s], [1j * s, c]])
        for q in range(n):
            amps = apply_single_qubit(amps, n, u, q)
        amps = amps * half
    state = StateVector(n, amps)
    probs = state.probabilities()
    success = float(probs[list(minimizers)].sum())
    samples = None
    if shots:
        gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        samples = gen.choice(probs.size, size=shots, p=probs / probs.sum())
    return AnnealResult(state, success, n_steps, list(minimizers), samples)


# --------------------------------------------------------------------------
# exhaustive oracle


@dataclass
class Landscape:
    """Exhaustive enumeration sorted by energy, ties in lexicographic assignment order.

    Assignments are bit tuples ``(x_0, x_1, ...)``: binary values for a
    PUBO, and ``q = (1 - s)/2`` for a QUBO.
    """

    n_vars: int
    assignments: np.ndarray
    energies: np.ndarray
    spins: bool

    @property
    def min_energy(self) -> float:
        return float(self.energies[0])

    def argmin(self, tol: float = 1e-9) -> list[tuple[int, ...]]:
        cut = self.min_energy + tol * max(1.0, abs(self.min_energy))
        return [tuple(int(b) for b in row) for row, e in zip(self.assignments, self.energies) if e <= cut]

    def argmin_spins(self, tol: float = 1e-9) -> list[tuple[int, ...]]:
        return [tuple(1 - 2 * b for b in a) for a in self.argmin(tol)]

    def rows(self):
        for rank, (a, e) in enumerate(zip(self.assignments, self.energies), start=1):
            yield "".join(str(int(b)) for b in a), float(e), rank

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["assignment", "energy", "rank"])
        for bits, e, rank in self.rows():
            w.writerow([bits, f"{e:.17g}", rank])
        return buf.getvalue()


def brute_force_minimize(p: PuboProblem | QuboProblem) -> Landscape:
    """Enumerate every assignment; raises ResourceError beyond 24 variables."""
    n = p.n_vars if isinstance(p, PuboProblem) else p.n
    if n > ENUMERATION_CAP:
        raise ResourceError(f"{n} variables exceeds the enumeration cap of {ENUMERATION_CAP}")
    idx = np.arange(2**n, dtype=np.int64)
    # column v holds bit of variable v; lexicographic order on (x_0, x_1, ...)
    bits = ((idx[:, None] >> (n - 1 - np.arange(n))) & 1).astype(np.int8)
    if isinstance(p, PuboProblem):
        energies = p.energies(bits)
        spins = False
    else:
        s = 1 - 2 * bits.astype(float)
        energies = -(s @ p.h) + np.einsum("ki,ij,kj->k", s, p.J, s)
        spins = True
    order = np.argsort(energies, kind="stable")
    return Landscape(n, bits[order], energies[order], spins)


# --------------------------------------------------------------------------
# text format: "vars N", optional "scale x" / "offset y", then "c i j ... coeff" (1-based)


def write_pubo(p: PuboProblem) -> str:
    lines = [f"vars {p.n_vars}"]
    for k, c in p.terms.items():
        lines.append(" ".join(["c"] + [str(v + 1) for v in k] + [f"{c:.17g}"]))
    return "\n".join(lines) + "\n"


def write_qubo(p: QuboProblem) -> str:
    """Ising coefficients as a spin polynomial: linear terms carry ``-h_i``."""
    lines = [f"vars {p.n}", f"scale {p.scale:.17g}", f"offset {p.offset:.17g}"]
    for i in range(p.n):
        if p.h[i]:
            lines.append(f"c {i + 1} {-p.h[i]:.17g}")
    for i, j in zip(*np.nonzero(p.J)):
        lines.append(f"c {i + 1} {j + 1} {p.J[i, j]:.17g}")
    return "\n".join(lines) + "\n"


def _parse_poly(text: str) -> tuple[int, dict[str, float], list[tuple[tuple[int, ...], float, int]]]:
    n = None
    meta: dict[str, float] = {}
    terms: list[tuple[tuple[int, ...], float, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "vars":
                if n is not None or len(tok) != 2:
                    raise ParseError("expected a single 'vars N' header", lineno)
                n = int(tok[1])
                if n < 0:
                    raise ParseError("variable count must be non-negative", lineno)
            elif tok[0] in ("scale", "offset"):
                meta[tok[0]] = float(tok[1])
            elif tok[0] == "c":
                if n is None:
                    raise ParseError("term before 'vars' header", lineno)
                if len(tok) < 2:
                    raise ParseError("term without coefficient", lineno)
                idx = tuple(int(t) - 1 for t in tok[1:-1])
                if any(b <= a for a, b in zip(idx, idx[1:])):
                    raise ParseError("indices must be strictly ascending", lineno)
                if any(not 0 <= v < n for v in idx):
                    raise ParseError(f"index outside 1..{n}", lineno)
                terms.append((idx, float(tok[-1]), lineno))
            else:
                raise ParseError(f"unknown record {tok[0]!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), lineno) from None
    if n is None:
        raise ParseError("missing 'vars N' header")
    return n, meta, terms


def read_pubo(text: str) -> PuboProblem:
    n, _, terms = _parse_poly(text)
    return PuboProblem(n, [(k, c) for k, c, _ in terms])


def read_qubo(text: str, rescale: bool = False) -> QuboProblem:
    """Parse a spin polynomial of degree at most two.

    With ``rescale`` set, coefficients beyond the unit bound are divided by
    their largest magnitude instead of being rejected; the factor is folded
    into ``scale``.
    """
    n, meta, terms = _parse_poly(text)
    h = np.zeros(n)
    J = np.zeros((n, n))
    offset = meta.get("offset", 0.0)
    scale = meta.get("scale", 1.0)
    for k, c, lineno in terms:
        if len(k) == 0:
            offset += c
        elif len(k) == 1:
            h[k[0]] -= c
        elif len(k) == 2:
            J[k] += c
        else:
            raise ParseError("QUBO terms have at most two indices", lineno)
    peak = max(np.max(np.abs(h), initial=0), np.max(np.abs(J), initial=0))
    if rescale and peak > 1:
        r = QuboProblem.rescaled(h, J)
        return QuboProblem(r.h, r.J, scale * r.scale, offset)
    return QuboProblem(h, J, scale, offset)
