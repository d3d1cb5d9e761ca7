"""First-quantized dynamics on a position grid (atomic units, hbar = m_e = e = 1).

Each Cartesian coordinate of each particle gets its own ``n``-qubit register.
Register ``r = particle * dims + axis`` occupies qubits ``r*n .. r*n + n - 1``,
so a ``B``-particle system in ``dims`` dimensions uses ``dims * B * n`` qubits.
Boundary conditions are periodic, as implied by the Fourier transform.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ContainmentError, DomainError, ResourceError
from .statevector import StateVector, apply_qft, load_amplitudes

CONTAINMENT = 1e-6
QUBIT_CAP = 24


@dataclass(frozen=True)
class GridSpec:
    n_qubits_per_dim: int
    extent: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ext = tuple((float(lo), float(hi)) for lo, hi in self.extent)
        object.__setattr__(self, "extent", ext)
        if self.n_qubits_per_dim < 1:
            raise DomainError("need at least one qubit per dimension")
        if not ext or any(hi <= lo for lo, hi in ext):
            raise DomainError(f"invalid grid extent {ext}")

    @classmethod
    def uniform(cls, n_qubits_per_dim: int, lo: float, hi: float, dims: int = 1) -> "GridSpec":
        return cls(n_qubits_per_dim, ((lo, hi),) * dims)

    @property
    def dims(self) -> int:
        return len(self.extent)

    @property
    def points(self) -> int:
        return 2**self.n_qubits_per_dim

    def spacing(self, axis: int = 0) -> float:
        lo, hi = self.extent[axis]
        return (hi - lo) / self.points

    def coordinates(self, axis: int = 0) -> np.ndarray:
        return self.extent[axis][0] + self.spacing(axis) * np.arange(self.points)

    def momenta(self, axis: int = 0) -> np.ndarray:
        """Signed momentum lattice ``2 pi k / (N dx)`` with ``k`` wrapped to ``[-N/2, N/2)``."""
        n = self.points
        k = np.arange(n)
        k = np.where(k >= n // 2, k - n, k)
        return 2 * np.pi * k / (n * self.spacing(axis))


@dataclass(frozen=True)
class ParticleSet:
    masses: tuple[float, ...]
    charges: tuple[float, ...]

    def __post_init__(self):
        m = tuple(float(x) for x in self.masses)
        q = tuple(float(x) for x in self.charges)
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "charges", q)
        if len(m) != len(q) or not m:
            raise DomainError("need one mass and one charge per particle")
        if any(x <= 0 for x in m):
            raise DomainError("masses must be positive")

    @classmethod
    def single(cls, mass: float = 1.0, charge: float = 0.0) -> "ParticleSet":
        return cls((mass,), (charge,))

    def __len__(self) -> int:
        return len(self.masses)


class GridWavefunction:
    """Amplitudes over all grid configurations of a particle set."""

    def __init__(self, grid: GridSpec, particles: ParticleSet, amplitudes):
        self.grid = grid
        self.particles = particles
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2**self.n_qubits:
            raise DomainError(f"expected {2**self.n_qubits} amplitudes, got {amps.size}")
        self.amplitudes = amps

    @property
    def n_registers(self) -> int:
        return len(self.particles) * self.grid.dims

    @property
    def n_qubits(self) -> int:
        return self.grid.n_qubits_per_dim * self.n_registers

    @property
    def state(self) -> StateVector:
        return StateVector(self.n_qubits, self.amplitudes)

    def copy(self, amplitudes=None) -> "GridWavefunction":
        return GridWavefunction(self.grid, self.particles,
                                self.amplitudes.copy() if amplitudes is None else amplitudes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def fidelity(self, other: "GridWavefunction") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def register_qubits(self, particle: int, axis: int) -> tuple[int, int]:
        n = self.grid.n_qubits_per_dim
        r = particle * self.grid.dims + axis
        return r * n, (r + 1) * n

    def register_index(self, particle: int, axis: int) -> np.ndarray:
        """Grid index of one coordinate for every configuration."""
        n = self.grid.n_qubits_per_dim
        lo, _ = self.register_qubits(particle, axis)
        idx = np.arange(self.amplitudes.size, dtype=np.int64)
        return (idx >> lo) & (2**n - 1)

    def positions(self) -> np.ndarray:
        """Array ``(particles, dims, configurations)`` of coordinates."""
        out = np.empty((len(self.particles), self.grid.dims, self.amplitudes.size))
        for i in range(len(self.particles)):
            for a in range(self.grid.dims):
                out[i, a] = self.grid.coordinates(a)[self.register_index(i, a)]
        return out

    def momenta(self) -> np.ndarray:
        """Momentum lattice value of each configuration index, read as a momentum-space label."""
        out = np.empty((len(self.particles), self.grid.dims, self.amplitudes.size))
        for i in range(len(self.particles)):
            for a in range(self.grid.dims):
                out[i, a] = self.grid.momenta(a)[self.register_index(i, a)]
        return out

    def kinetic_diagonal(self) -> np.ndarray:
        p = self.momenta()
        m = np.asarray(self.particles.masses)[:, None, None]
        return np.sum(p**2 / (2 * m), axis=(0, 1))

    def to_momentum(self) -> np.ndarray:
        """Momentum-space amplitudes via the inverse QFT on every register."""
        st = self.state
        for i in range(len(self.particles)):
            for a in range(self.grid.dims):
                st = apply_qft(st, self.register_qubits(i, a), inverse=True)
        return st.amplitudes

    def from_momentum(self, amps: np.ndarray) -> np.ndarray:
        st = StateVector(self.n_qubits, amps)
        for i in range(len(self.particles)):
            for a in range(self.grid.dims):
                st = apply_qft(st, self.register_qubits(i, a))
        return st.amplitudes

    def swapped(self, i: int = 0, j: int = 1) -> "GridWavefunction":
        """Amplitudes with the coordinates of particles ``i`` and ``j`` exchanged."""
        d, b = self.grid.dims, len(self.particles)
        shape = (self.grid.points,) * (b * d)
        t = self.amplitudes.reshape(shape)
        # axis for register r is (R - 1 - r)
        axes = list(range(b * d))
        big = b * d - 1
        for a in range(d):
            ai, aj = big - (i * d + a), big - (j * d + a)
            axes[ai], axes[aj] = axes[aj], axes[ai]
        return self.copy(np.transpose(t, axes).reshape(-1).copy())


def _potential_values(wfn: GridWavefunction, potential) -> np.ndarray:
    if potential is None:
        return np.zeros(wfn.amplitudes.size)
    if callable(potential):
        v = potential(wfn.positions())
    else:
        v = potential
    v = np.asarray(v, dtype=float)
    if v.shape != wfn.amplitudes.shape:
        raise DomainError(f"potential has shape {v.shape}, expected {wfn.amplitudes.shape}")
    return v


def init_gaussian(grid: GridSpec, center, width, momentum=0.0,
                  particles: ParticleSet | None = None) -> GridWavefunction:
    """Product of Gaussian packets with position variance ``width**2`` per coordinate.

    ``center``, ``width`` and ``momentum`` broadcast to shape (particles, dims).
    Raises ContainmentError if any packet's amplitude at the box edge exceeds
    1e-6 of its peak.
    """
    particles = particles or ParticleSet.single()
    shape = (len(particles), grid.dims)
    needed = grid.n_qubits_per_dim * shape[0] * shape[1]
    if needed > QUBIT_CAP:
        raise ResourceError(f"grid needs {needed} qubits, above the cap of {QUBIT_CAP}")
    c = np.broadcast_to(np.asarray(center, dtype=float), shape)
    s = np.broadcast_to(np.asarray(width, dtype=float), shape)
    k0 = np.broadcast_to(np.asarray(momentum, dtype=float), shape)
    if np.any(s <= 0):
        raise DomainError("width must be positive")
    for i in range(shape[0]):
        for a in range(shape[1]):
            lo, hi = grid.extent[a]
            near = min(abs(lo - c[i, a]), abs(hi - c[i, a]))
            if not lo <= c[i, a] < hi or math.exp(-near**2 / (4 * s[i, a] ** 2)) >= CONTAINMENT:
                raise ContainmentError(
                    f"packet {i} axis {a} centred at {c[i, a]} with width {s[i, a]} reaches the box edge"
                )
    wfn = GridWavefunction(grid, particles, np.zeros(2 ** (grid.n_qubits_per_dim * shape[0] * shape[1])))
    pos = wfn.positions()
    density = np.exp(-np.sum((pos - c[:, :, None]) ** 2 / (2 * s[:, :, None] ** 2), axis=(0, 1)))
    phase_table = np.sum(k0[:, :, None] * pos, axis=(0, 1))
    state = load_amplitudes(density, phase_fn=lambda x: phase_table[x])
    return GridWavefunction(grid, particles, state.amplitudes)


def harmonic_potential(omega: float, center=0.0, masses: Sequence[float] = (1.0,)) -> Callable:
    """``V = sum_i m_i omega^2 |x_i - center|^2 / 2`` as a function of positions."""
    m = np.asarray(masses, dtype=float)

    def v(pos: np.ndarray) -> np.ndarray:
        c = np.broadcast_to(np.asarray(center, dtype=float), pos.shape[:2])
        return np.sum(0.5 * m[:, None, None] * omega**2 * (pos - c[:, :, None]) ** 2, axis=(0, 1))

    return v


def coulomb_potential(particles: ParticleSet, softening: float | None = None) -> Callable:
    """Pairwise ``q_i q_j / sqrt(r_ij^2 + eps^2)`` summed over ``i < j``.

    ``softening=None`` means half the grid spacing, resolved when the returned
    function is evaluated on a wavefunction's positions.
    """
    if softening is not None and softening < 0:
        raise DomainError("softening must be non-negative")
    q = np.asarray(particles.charges)

    def v(pos: np.ndarray, eps: float | None = softening) -> np.ndarray:
        out = np.zeros(pos.shape[-1])
        if eps is None:
            eps = _default_softening(pos)
        for i in range(len(q)):
            for j in range(i + 1, len(q)):
                r2 = np.sum((pos[i] - pos[j]) ** 2, axis=0)
                out += q[i] * q[j] / np.sqrt(r2 + eps**2)
        return out

    return v


def _default_softening(pos: np.ndarray) -> float:
    xs = np.unique(pos[0, 0])
    return 0.5 * float(xs[1] - xs[0]) if xs.size > 1 else 0.0


def split_operator_step(wfn: GridWavefunction, potential, dt: float, order: int = 2) -> GridWavefunction:
    """One split-operator step.

    ``order=2`` (default) is the symmetric split ``V/2, T, V/2``; ``order=1``
    is ``V`` then ``T``. The kinetic factor is applied in momentum space,
    reached with the inverse QFT on each register and left with the QFT.
    """
    if dt == 0:
        raise DomainError("dt must be nonzero")
    v = _potential_values(wfn, potential)
    return _Propagator(wfn, v, dt, order).step(wfn.amplitudes, wfn)


class _Propagator:
    def __init__(self, wfn: GridWavefunction, v: np.ndarray, dt: float, order: int):
        if order not in (1, 2):
            raise DomainError("order must be 1 or 2")
        self.order = order
        self.kin = np.exp(-1j * wfn.kinetic_diagonal() * dt)
        self.pot = np.exp(-1j * v * dt / (2 if order == 2 else 1))

    def step_amps(self, amps: np.ndarray, wfn: GridWavefunction) -> np.ndarray:
        amps = amps * self.pot
        mom = wfn.copy(amps).to_momentum()
        amps = wfn.from_momentum(mom * self.kin)
        if self.order == 2:
            amps = amps * self.pot
        return amps

    def step(self, amps: np.ndarray, wfn: GridWavefunction) -> GridWavefunction:
        return wfn.copy(self.step_amps(amps, wfn))


@dataclass
class TraceRow:
    step: int
    time: float
    norm: float
    energy: float
    mean_x: np.ndarray
    mean_p: np.ndarray


def observables(wfn: GridWavefunction, v: np.ndarray) -> tuple[float, float, np.ndarray, np.ndarray]:
    """Norm, energy, ``<x>`` and ``<p>`` (arrays of shape (particles, dims))."""
    prob = np.abs(wfn.amplitudes) ** 2
    norm = float(np.sqrt(prob.sum()))
    mom = wfn.to_momentum()
    pprob = np.abs(mom) ** 2
    kinetic = float(np.dot(pprob, wfn.kinetic_diagonal()))
    energy = kinetic + float(np.dot(prob, v))
    mean_x = wfn.positions() @ prob
    mean_p = wfn.momenta() @ pprob
    return norm, energy, mean_x, mean_p


@dataclass
class Trace:
    rows: list[TraceRow] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def to_csv(self) -> str:
        if not self.rows:
            return "step,time,norm,energy\n"
        b, d = self.rows[0].mean_x.shape
        labels = [f"{i}_{a}" for i in range(b) for a in range(d)]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "time", "norm", "energy"] + [f"x{l}" for l in labels] + [f"p{l}" for l in labels])
        for r in self.rows:
            values = [r.time, r.norm, r.energy, *r.mean_x.ravel(), *r.mean_p.ravel()]
            w.writerow([r.step] + [f"{float(v):.17g}" for v in values])
        return buf.getvalue()


def propagate(wfn: GridWavefunction, potential, t: float, dt: float, order: int = 2,
              record_every: int = 1) -> tuple[GridWavefunction, Trace]:
    """Run ``t / dt`` split-operator steps and record observables.

    ``t`` must be an integer multiple of ``dt`` (negative ``dt`` runs
    backwards). Observables are recorded at step 0 and every
    ``record_every`` steps, plus the final step.
    """
    if dt == 0:
        raise DomainError("dt must be nonzero")
    ratio = t / dt
    k = int(round(ratio))
    if k < 0 or abs(ratio - k) > 1e-9 * max(1.0, abs(ratio)):
        raise DomainError(f"t = {t} is not a non-negative integer multiple of dt = {dt}")
    v = _potential_values(wfn, potential)
    prop = _Propagator(wfn, v, dt, order)
    trace = Trace()

    def record(step: int, w: GridWavefunction):
        norm, energy, mx, mp = observables(w, v)
        trace.rows.append(TraceRow(step, step * dt, norm, energy, mx, mp))

    if record_every:
        record(0, wfn)
    amps = wfn.amplitudes
    for s in range(1, k + 1):
        amps = prop.step_amps(amps, wfn)
        if record_every and (s % record_every == 0 or s == k):
            record(s, wfn.copy(amps))
    return wfn.copy(amps), trace
