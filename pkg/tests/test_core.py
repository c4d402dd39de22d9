import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multiportlab.core import (check_hermitian, check_unitary, equal_up_to_phase, evolve, exp_evolution,
                               global_phase, phase_align, principal_log_hamiltonian, random_unitary,
                               unitarity_residual)
from multiportlab.errors import BranchCutError, DimensionError, NotHermitianError, NotUnitaryError

from conftest import GROVER3, COUPLING


def test_check_unitary_examples():
    assert check_unitary(GROVER3, 1e-12)
    assert check_unitary(np.eye(4), 0.0)
    assert not check_unitary(np.diag([2.0, 1.0]), 1e-6)


def test_non_square_rejected():
    with pytest.raises(DimensionError):
        check_unitary(np.ones((2, 3)))


def test_check_hermitian():
    assert check_hermitian(COUPLING)
    assert not check_hermitian(np.array([[0, 1], [0, 0]]))


def test_log_of_grover():
    H = principal_log_hamiltonian(GROVER3)
    assert np.allclose(H, np.pi / 6 * COUPLING, atol=1e-12)
    assert np.allclose(np.linalg.eigvalsh(H), [-np.pi / 2, np.pi / 2, np.pi / 2], atol=1e-12)


def test_log_trivial_cases():
    assert np.allclose(principal_log_hamiltonian(np.eye(3)), 0, atol=1e-15)
    H = principal_log_hamiltonian(np.diag([1j, -1j]))
    assert np.allclose(H, np.diag([-np.pi / 2, np.pi / 2]), atol=1e-14)


def test_log_time_step_scales():
    H = principal_log_hamiltonian(GROVER3, time_step=2.0)
    assert np.allclose(H, np.pi / 12 * COUPLING, atol=1e-12)


def test_branch_cut_raises_then_overrides():
    U = np.diag([-1.0, 1.0]).astype(complex)
    with pytest.raises(BranchCutError):
        principal_log_hamiltonian(U)
    H = principal_log_hamiltonian(U, allow_branch_cut=True)
    assert np.allclose(np.diag(H), [-np.pi, 0], atol=1e-14)


def test_log_rejects_non_unitary():
    with pytest.raises(NotUnitaryError):
        principal_log_hamiltonian(np.diag([2.0, 1.0]))


def test_exp_evolution_examples():
    H = np.array([[0, 1], [1, 0]], dtype=complex)
    assert np.allclose(exp_evolution(H, np.pi / 2), -1j * H, atol=1e-14)
    assert np.allclose(exp_evolution(H, 0.0), np.eye(2))
    # power series oracle
    A = -1j * np.pi / 6 * COUPLING
    series, term = np.eye(3, dtype=complex), np.eye(3, dtype=complex)
    for n in range(1, 40):
        term = term @ A / n
        series = series + term
    assert np.allclose(exp_evolution(np.pi / 6 * COUPLING, 1.0), series, atol=1e-12)
    assert np.allclose(series, GROVER3, atol=1e-12)


def test_exp_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        exp_evolution(np.array([[0, 1], [0, 0]]))


def test_evolve_examples():
    psi = np.ones(3) / np.sqrt(3)
    assert np.allclose(evolve(GROVER3, psi, 0), psi)
    assert np.allclose(evolve(GROVER3, psi, 1), 1j * psi, atol=1e-14)
    assert np.allclose(evolve(GROVER3, [1, 0, 0], 2), [-1, 0, 0], atol=1e-14)
    with pytest.raises(DimensionError):
        evolve(GROVER3, [1, 0], 1)


def test_phase_helpers():
    A = np.array([[1, 2j], [0.5, 1]])
    c = np.exp(0.7j)
    assert equal_up_to_phase(A, c * A)
    assert abs(global_phase(c * A, A) - c) < 1e-14
    aligned = phase_align(c * A)
    assert abs(aligned[0, 1].imag) < 1e-14 and aligned[0, 1].real > 0
    assert not equal_up_to_phase(A, A.T)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_log_exp_round_trip(dim, seed):
    U = random_unitary(dim, np.random.default_rng(seed))
    lam = np.linalg.eigvals(U)
    if np.min(np.abs(lam + 1)) < 1e-6:
        return
    H = principal_log_hamiltonian(U)
    assert check_hermitian(H, 1e-12)
    assert np.all(np.linalg.eigvalsh(H) <= np.pi + 1e-12)
    assert np.allclose(exp_evolution(H), U, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_random_unitary_is_unitary(dim, seed):
    assert unitarity_residual(random_unitary(dim, np.random.default_rng(seed))) < 1e-12
