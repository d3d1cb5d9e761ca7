import numpy as np
import pytest

from helpers import compare_pea, random_pauli_sum, random_state
from oracles import time_ordered
from qchemsim.errors import DomainError
from qchemsim.fermion import assemble_hamiltonian, number_operator
from qchemsim.integrals import random_integrals
from qchemsim.pauli import PauliSum, dense_matrix
from qchemsim.spectrum import (
    CetsSpec,
    DiagonalUnitary,
    EnergyWindow,
    ExactUnitary,
    SpectralResult,
    TrotterUnitary,
    adiabatic_state_prep,
    ground_state,
    iterative_pea,
    phase_estimation,
    prepare_cets,
    prepare_fock,
    reduced_density_matrix,
    spectral_gap,
)
from qchemsim.statevector import StateVector, expectation, new_basis_state


# ---------------------------------------------------------------- window


def test_window_maps_energy_to_phase():
    w = EnergyWindow(-2.0, 2.0)
    assert w.phase(-2.0) == 0 and w.phase(0.0) == 0.5 and w.energy(0.25) == -1.0
    assert w.contains([-2.0, 1.9]) and not w.contains(2.0)
    with pytest.raises(DomainError):
        EnergyWindow(1.0, 1.0)


def test_window_bounds_spectrum():
    rng = np.random.default_rng(0)
    for _ in range(10):
        h = random_pauli_sum(3, 6, rng)
        w = EnergyWindow.from_pauli_sum(h)
        assert w.contains(np.linalg.eigvalsh(dense_matrix(h)))


def test_zero_hamiltonian_window():
    w = EnergyWindow.from_pauli_sum(PauliSum(2))
    assert w.e_min == -0.5 and w.e_max == 0.5


def test_unitaries_encode_window_phase():
    h = PauliSum(2, {"ZI": 0.3, "XX": 0.5, "II": -0.2})
    u = ExactUnitary(h)
    vals, vecs = np.linalg.eigh(dense_matrix(h))
    got = np.diag(vecs.conj().T @ u.base_matrix() @ vecs)
    np.testing.assert_allclose(got, np.exp(2j * np.pi * u.window.phase(vals)), atol=1e-12)
    errs = [np.abs(TrotterUnitary(h, u.window, steps=k).base_matrix() - u.base_matrix()).max() for k in (50, 100)]
    assert errs[1] < 1e-4 and 3.2 < errs[0] / errs[1] < 4.8
    t = TrotterUnitary(h, u.window, steps=100)
    np.testing.assert_allclose(t.power(8), np.linalg.matrix_power(t.base_matrix(), 8), atol=1e-12)


def test_aliasing_flag():
    h = PauliSum(1, {"Z": 1.0})
    assert not ExactUnitary(h).aliasing_risk()
    assert ExactUnitary(h, EnergyWindow(-0.5, 0.5)).aliasing_risk()


# ---------------------------------------------------------------- full PEA


def test_representable_phase_is_deterministic():
    u = DiagonalUnitary([0.0, 0.25])
    for seed in range(5):
        res = phase_estimation(u, new_basis_state(1, 1), 2, rng=seed)
        assert res.bits(res.most_likely()) == "01"
        assert res.probabilities[1] == pytest.approx(1.0, abs=1e-12)


def test_eigenstate_input_repeats():
    h = random_pauli_sum(3, 6, np.random.default_rng(1))
    u = ExactUnitary(h)
    _, g = ground_state(h)
    outcomes = {phase_estimation(u, g, 6, rng=s).most_likely() for s in range(10)}
    assert len(outcomes) <= 2  # non-representable phase: nearest or next-nearest bin
    vals = np.linalg.eigvalsh(dense_matrix(h))
    for v in outcomes:
        assert abs(u.window.energy(v / 64) - vals[0]) <= u.window.width / 64


def test_collapsed_system_is_eigenstate():
    h = random_pauli_sum(3, 6, np.random.default_rng(2))
    u = ExactUnitary(h)
    psi = random_state(3, np.random.default_rng(3))
    res = phase_estimation(u, psi, 10, rng=4)
    m = dense_matrix(h)
    e = res.energy(res.outcomes[0])
    v = res.post_state.amplitudes
    assert np.linalg.norm(m @ v - e * v) < 0.05 * u.window.width


@pytest.mark.parametrize("seed", range(3))
def test_pea_matches_dense_diagonalization(seed):
    rng = np.random.default_rng(100 + seed)
    h = random_pauli_sum(4, 8, rng)
    psi = random_state(4, rng)
    cmp = compare_pea(h, psi, ExactUnitary(h), 8, 10_000, rng)
    assert cmp.max_energy_error <= cmp.resolution
    assert cmp.max_weight_error <= 0.02


def test_shot_weights_sum_to_one_and_csv():
    u = DiagonalUnitary([0.0, 0.5], EnergyWindow(0.0, 1.0))
    psi = StateVector(1, np.array([1, 1]) / np.sqrt(2))
    res = phase_estimation(u, psi, 3, shots=2000, rng=0)
    assert sum(res.weights().values()) == pytest.approx(1.0)
    lines = res.to_csv().splitlines()
    assert lines[0] == "bits,phase,energy,weight"
    rows = [l.split(",") for l in lines[1:]]
    assert {r[0] for r in rows} == {"000", "100"}
    assert all(float(r[2]) == float(r[1]) for r in rows)


def test_peaks_merge_cyclic_neighbours():
    res = SpectralResult(3, np.array([7, 7, 0, 3]))
    peaks = res.peaks()
    assert peaks[0] == (7, 0.75) and peaks[1] == (3, 0.25)


def test_pea_input_validation():
    u = DiagonalUnitary([0.0, 0.5])
    with pytest.raises(DomainError):
        phase_estimation(u, new_basis_state(2), 3)
    with pytest.raises(DomainError):
        phase_estimation(u, new_basis_state(1), 0)
    with pytest.raises(DomainError):
        phase_estimation(u, StateVector(1, np.array([1.0, 1.0])), 2)


# ---------------------------------------------------------------- iterative PEA


def test_iterative_representable_phase():
    res = iterative_pea(DiagonalUnitary([0.0, 0.25]), new_basis_state(1, 1), 20, rng=0)
    assert res.bits == "01" + "0" * 18 and res.phase == 0.25 and not res.ambiguous


def test_iterative_one_third():
    res = iterative_pea(DiagonalUnitary([0.0, 1 / 3]), new_basis_state(1, 1), 20, rng=1)
    assert res.bits == "01" * 10
    assert abs(res.phase - 1 / 3) < 2**-20


def test_iterative_agrees_with_full_register_on_eigenstate():
    ham = random_integrals(4, np.random.default_rng(7))
    h = assemble_hamiltonian(ham)
    u = ExactUnitary(h)
    _, g = ground_state(h)
    it = iterative_pea(u, g, 20, rng=2)
    full = phase_estimation(u, g, 12, rng=3)
    # the 12-bit readout is the rounded or truncated 20-bit one
    assert abs(it.value / 2**20 - full.most_likely() / 2**12) <= 2**-12
    assert abs(it.energy - np.linalg.eigvalsh(dense_matrix(h))[0]) <= u.window.width * 2**-20


def test_iterative_flags_ambiguous_bits():
    # an equal superposition of phases 0 and 1/2 makes the only round a coin flip
    u = DiagonalUnitary([0.0, 0.5])
    psi = StateVector(1, np.array([1, 1]) / np.sqrt(2))
    res = iterative_pea(u, psi, 1, rng=0, shots_per_bit=1001)
    assert res.ambiguous == [1]
    with pytest.raises(DomainError):
        iterative_pea(u, psi, 1, shots_per_bit=10)


# ---------------------------------------------------------------- Fock states


def test_prepare_fock():
    s = prepare_fock("0100")
    assert s.amplitudes[2] == 1  # mode 2 on qubit 1
    assert prepare_fock("0000").amplitudes[0] == 1
    for occ in ("1010", "1111", "0011"):
        assert expectation(prepare_fock(occ), number_operator(4)) == occ.count("1")
    with pytest.raises(DomainError):
        prepare_fock("012")


# ---------------------------------------------------------------- ASP


def test_asp_constant_hamiltonian():
    h = PauliSum(2, {"ZZ": 1.0, "XI": 0.4})
    res = adiabatic_state_prep(h, h, t_run=3.0, dt=0.05)
    assert res.fidelity > 1 - 1e-8


def test_asp_single_qubit_matches_time_ordered_oracle():
    h0 = PauliSum.from_label("X", -1.0)
    h1 = PauliSum.from_label("Z", -1.0)
    m0, m1 = dense_matrix(h0), dense_matrix(h1)
    _, g0 = ground_state(h0)
    fid = []
    for t_run in (0.5, 2.0, 8.0, 32.0):
        res = adiabatic_state_prep(h0, h1, t_run, dt=0.01)
        ref = time_ordered(lambda t: (1 - t / t_run) * m0 + (t / t_run) * m1, t_run, g0.amplitudes)
        assert abs(np.vdot(ref, res.state.amplitudes)) ** 2 > 1 - 1e-6
        fid.append(res.fidelity)
    assert all(b >= a for a, b in zip(fid, fid[1:]))
    assert fid[-1] > 0.99


def test_asp_sudden_limit():
    h0 = PauliSum.from_label("X", -1.0)
    h1 = PauliSum(1, {"Z": -1.0, "X": -0.2})
    res = adiabatic_state_prep(h0, h1, t_run=1e-4, dt=1e-4)
    assert abs(res.fidelity - res.initial_overlap) < 0.01


def test_asp_rejects_bad_times():
    h = PauliSum.from_label("Z")
    with pytest.raises(DomainError):
        adiabatic_state_prep(h, h, t_run=0.0, dt=0.1)
    with pytest.raises(DomainError):
        adiabatic_state_prep(h, h, t_run=1.0, dt=-0.1)


def test_spectral_gap():
    assert spectral_gap(PauliSum(2, {"ZI": 1.0, "IZ": 0.5})) == pytest.approx(1.0)


# ---------------------------------------------------------------- CETS


def test_cets_three_levels():
    spec = CetsSpec((0.0, 1.0, 2.0), 1.0)
    rho = reduced_density_matrix(prepare_cets(spec), 2)
    expected = np.exp(-np.arange(3.0)) / np.exp(-np.arange(3.0)).sum()
    np.testing.assert_allclose(np.diag(rho).real[:3], expected, atol=1e-12)
    assert abs(rho[3, 3]) < 1e-15
    assert spec.partition_function == pytest.approx(np.exp(-np.arange(3.0)).sum())


def test_cets_limits():
    s0 = prepare_cets(CetsSpec((0.3, 1.0, 2.0, 5.0), 0.0))
    paired = [k * 4 + k for k in range(4)]
    np.testing.assert_allclose(s0.amplitudes[paired], 0.5, atol=1e-12)
    cold = prepare_cets(CetsSpec((0.3, 1.0, 2.0, 5.0), np.inf))
    assert cold.fidelity(new_basis_state(4, 0)) == pytest.approx(1.0, abs=1e-12)
    warm = prepare_cets(CetsSpec((0.3, 1.0, 2.0, 5.0), 60.0))
    assert warm.fidelity(new_basis_state(4, 0)) > 1 - 1e-12


def test_cets_in_eigenbasis():
    h = random_pauli_sum(2, 5, np.random.default_rng(8))
    vals, vecs = np.linalg.eigh(dense_matrix(h))
    spec = CetsSpec(tuple(vals), 0.7)
    rho = reduced_density_matrix(prepare_cets(spec, vecs), 2)
    gibbs = vecs @ np.diag(spec.gibbs_weights()) @ vecs.conj().T
    np.testing.assert_allclose(rho, gibbs, atol=1e-12)


def test_cets_rejects_negative_beta():
    with pytest.raises(DomainError):
        CetsSpec((0.0, 1.0), -0.1)
