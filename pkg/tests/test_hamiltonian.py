import numpy as np
import pytest

from multiportlab.core import check_unitary, exp_evolution, random_unitary
from multiportlab.errors import GridError, NotUnitaryError
from multiportlab.hamiltonian import (beamsplitter_2, beamsplitter_4, doubled_evolution, momentum_state,
                                      reversible_double, three_point_dispersion, three_point_hamiltonian)
from multiportlab.multiport import grover_unitary

from conftest import GROVER3


def test_three_point_hamiltonian():
    H = three_point_hamiltonian()
    assert np.allclose(H, 1j * np.pi / 2 * GROVER3, atol=1e-14)
    assert np.allclose(np.linalg.eigvalsh(H), [-np.pi / 2, np.pi / 2, np.pi / 2], atol=1e-12)
    psi = np.ones(3) / np.sqrt(3)
    assert abs(np.vdot(psi, H @ psi) + np.pi / 2) < 1e-14
    assert np.allclose(np.diag(H), np.pi / 6)


@pytest.mark.parametrize("k, E", [(0.0, -np.pi / 2), (2 * np.pi / 3, np.pi / 2), (-2 * np.pi / 3, np.pi / 2)])
def test_dispersion_values(k, E):
    assert abs(three_point_dispersion(k) - E) < 1e-14


def test_dispersion_matches_momentum_eigenvalues():
    H = three_point_hamiltonian()
    for n in range(3):
        k = 2 * np.pi * n / 3
        v = momentum_state(k, 3).vector
        assert np.max(np.abs(H @ v - three_point_dispersion(k) * v)) <= 1e-12


def test_momentum_states():
    s0 = momentum_state(0, 3)
    assert np.allclose(s0.vector, np.ones(3) / np.sqrt(3))
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(momentum_state(2 * np.pi / 3, 3).vector, np.array([1, w, w * w]) / np.sqrt(3))
    G = np.array([[np.vdot(momentum_state(2 * np.pi * a / 3, 3).vector, momentum_state(2 * np.pi * b / 3, 3).vector)
                   for b in range(3)] for a in range(3)])
    assert np.allclose(G, np.eye(3), atol=1e-14)
    assert momentum_state(-2 * np.pi / 3, 3).k == pytest.approx(4 * np.pi / 3)
    with pytest.raises(GridError):
        momentum_state(0.5, 3)


def test_reversible_double_identity():
    H = reversible_double(np.eye(3)).matrix
    assert np.allclose(H, np.block([[np.zeros((3, 3)), np.eye(3)], [np.eye(3), np.zeros((3, 3))]]))
    assert np.allclose(np.linalg.eigvalsh(H), [-1] * 3 + [1] * 3)


def test_reversible_double_blocks():
    R = reversible_double(GROVER3)
    assert R.half_dim == 3
    assert np.allclose(R.forward_block, GROVER3)
    assert np.allclose(R.backward_block, GROVER3.conj().T)
    assert np.allclose(R.matrix @ R.matrix, np.eye(6), atol=1e-14)


def test_reversible_double_rejects_non_unitary():
    with pytest.raises(NotUnitaryError):
        reversible_double(np.diag([2.0, 1.0]))


def test_doubled_evolution_closed_form(rng):
    H = reversible_double(random_unitary(4, rng)).matrix
    for T in rng.uniform(-10, 10, size=20):
        assert np.max(np.abs(exp_evolution(H, T) - doubled_evolution(H, T))) <= 1e-10
    assert np.allclose(doubled_evolution(H, 0.0), np.eye(8))


def test_beamsplitters():
    assert np.max(np.abs(beamsplitter_2().conj().T @ beamsplitter_2() - np.eye(2))) <= 1e-15
    B4 = beamsplitter_4()
    assert np.allclose(B4, reversible_double(beamsplitter_2()).matrix)
    assert check_unitary(B4, 1e-14)
    assert np.max(np.abs(exp_evolution(B4, np.pi / 2) - (-1j) * B4)) <= 1e-12


def test_doubled_grover_four():
    R = reversible_double(grover_unitary(4))
    assert np.allclose(doubled_evolution(R, np.pi / 2), -1j * R.matrix)
