import itertools

import numpy as np
import pytest

from oracles import exact_evolution, fock_hamiltonian, fock_operator
from qchemsim.errors import DomainError
from qchemsim.fermion import (
    SecondQuantizedHamiltonian,
    annihilation,
    assemble_hamiltonian,
    creation,
    jordan_wigner,
    number_operator,
)
from qchemsim.integrals import random_integrals
from qchemsim.pauli import PauliSum, dense_matrix
from qchemsim.statevector import StateVector, expectation
from qchemsim.trotter import evolve


def test_single_mode_creation():
    a_dag = jordan_wigner(1, 1)
    assert a_dag.coefficient("X") == 0.5 and a_dag.coefficient("Y") == -0.5j
    np.testing.assert_allclose(dense_matrix(a_dag), [[0, 0], [1, 0]], atol=1e-15)


def test_two_mode_strings():
    # mode 1 lives on qubit 0 and carries a Z on qubit 1; mode 2 has no string
    a1 = jordan_wigner(1, 2)
    assert set(t.letters for t in a1.terms) == {"XZ", "YZ"}
    a2 = jordan_wigner(2, 2)
    assert set(t.letters for t in a2.terms) == {"IX", "IY"}


@pytest.mark.parametrize("mode", [0, 3])
def test_mode_out_of_range(mode):
    with pytest.raises(DomainError):
        jordan_wigner(mode, 2)


@pytest.mark.parametrize("m", range(1, 6))
def test_anticommutation(m):
    cre = [dense_matrix(creation(i, m)) for i in range(1, m + 1)]
    ann = [dense_matrix(annihilation(i, m)) for i in range(1, m + 1)]
    eye = np.eye(2**m)
    worst = 0.0
    for i, j in itertools.product(range(m), repeat=2):
        worst = max(worst, np.abs(ann[i] @ cre[j] + cre[j] @ ann[i] - (i == j) * eye).max())
        worst = max(worst, np.abs(ann[i] @ ann[j] + ann[j] @ ann[i]).max())
    assert worst < 1e-12


def test_ladder_matches_occupation_oracle():
    m = 4
    for i in range(m):
        np.testing.assert_allclose(dense_matrix(creation(i + 1, m)), fock_operator([(i, True)], m), atol=1e-15)


def test_single_mode_hamiltonian_is_scaled_number_operator():
    eps = -0.7
    h = assemble_hamiltonian(SecondQuantizedHamiltonian(np.array([[eps]]), None))
    assert h.coefficient("I") == pytest.approx(eps / 2) and h.coefficient("Z") == pytest.approx(-eps / 2)


def test_zero_integrals_give_empty_sum():
    assert len(assemble_hamiltonian(SecondQuantizedHamiltonian.zeros(3))) == 0


def test_constant_goes_to_identity():
    h = assemble_hamiltonian(SecondQuantizedHamiltonian(np.zeros((2, 2)), None, 0.25))
    assert h.coefficient("II") == 0.25 and len(h) == 1


@pytest.mark.parametrize("seed", range(4))
def test_random_instance_matches_fock_space(seed):
    ham = random_integrals(4, np.random.default_rng(seed))
    h = assemble_hamiltonian(ham)
    assert all(isinstance(t.coefficient, complex) and t.coefficient.imag == 0 for t in h.terms)
    oracle = fock_hamiltonian(ham.h1, ham.h2, ham.constant)
    np.testing.assert_allclose(dense_matrix(h), oracle, atol=1e-10)


def test_unsymmetrised_two_electron_tensor_still_matches():
    # only the Hermitian partner symmetry is required
    rng = np.random.default_rng(9)
    b = rng.normal(size=(3,) * 4)
    h2 = b + b.transpose(3, 2, 1, 0)
    ham = SecondQuantizedHamiltonian(np.zeros((3, 3)), h2)
    np.testing.assert_allclose(dense_matrix(assemble_hamiltonian(ham)), fock_hamiltonian(ham.h1, h2), atol=1e-10)


def test_non_hermitian_rejected():
    h1 = np.array([[0.0, 1.0], [0.5, 0.0]])
    with pytest.raises(DomainError):
        assemble_hamiltonian(SecondQuantizedHamiltonian(h1, None))
    h2 = np.zeros((2,) * 4)
    h2[0, 1, 1, 0] = 1.0
    h2[0, 1, 0, 1] = 0.3
    with pytest.raises(DomainError):
        assemble_hamiltonian(SecondQuantizedHamiltonian(np.zeros((2, 2)), h2))


def test_bad_shapes():
    with pytest.raises(DomainError):
        SecondQuantizedHamiltonian(np.zeros((2, 3)), None)
    with pytest.raises(DomainError):
        SecondQuantizedHamiltonian(np.zeros((2, 2)), np.zeros((3,) * 4))


def test_number_operator_dense():
    n = dense_matrix(number_operator(3))
    np.testing.assert_allclose(np.diag(n), [bin(i).count("1") for i in range(8)])


def test_number_drift_bounded_by_trotter_error():
    ham = random_integrals(4, np.random.default_rng(3))
    h = assemble_hamiltonian(ham)
    rng = np.random.default_rng(4)
    # superposition inside the two-electron sector
    sector = [i for i in range(16) if bin(i).count("1") == 2]
    v = np.zeros(16, dtype=complex)
    v[sector] = rng.normal(size=len(sector)) + 1j * rng.normal(size=len(sector))
    psi = StateVector(4, v / np.linalg.norm(v))
    exact = StateVector(4, exact_evolution(dense_matrix(h), 1.3, psi.amplitudes))
    assert abs(expectation(exact, number_operator(4)) - 2) < 1e-10
    # single Pauli strings do not conserve N, so the drift is bounded by the splitting error:
    # |<N>_a - <N>_b| <= 2 ||N|| ||a - b||
    previous = np.inf
    for steps in (8, 32, 128):
        out = evolve(psi, h, t=1.3, n_steps=steps, order=2)
        drift = abs(expectation(out, number_operator(4)) - 2)
        assert drift <= 2 * 4 * np.linalg.norm(out.amplitudes - exact.amplitudes) + 1e-12
        assert drift < previous
        previous = drift
    assert previous < 1e-4


def test_hamiltonian_commutes_with_number():
    h = dense_matrix(assemble_hamiltonian(random_integrals(4, np.random.default_rng(5))))
    n = dense_matrix(number_operator(4))
    assert np.abs(h @ n - n @ h).max() < 1e-10


def test_sum_type():
    assert isinstance(assemble_hamiltonian(random_integrals(2, 0)), PauliSum)
