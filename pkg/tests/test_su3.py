import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multiportlab.chain import bloch_hamiltonian, k_samples
from multiportlab.core import check_hermitian
from multiportlab.errors import DimensionError, NotHermitianError
from multiportlab.su3 import (SIGMA, GellMannCoefficients, PauliCoefficients, tabulated_coefficients, gell_mann,
                              gell_mann_basis, su2_decompose, su2_reconstruct, su3_decompose, su3_reconstruct)


def random_hermitian(n, rng):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (A + A.conj().T) / 2


def test_gell_mann_examples():
    assert np.array_equal(gell_mann(1), [[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    assert np.allclose(gell_mann(8), np.diag([1, 1, -2]) / np.sqrt(3))
    assert np.trace(gell_mann(3)) == 0
    with pytest.raises(ValueError):
        gell_mann(9)


def test_trace_orthogonality():
    B = gell_mann_basis()
    G = np.array([[np.trace(a @ b) for b in B] for a in B])
    assert np.max(np.abs(G - 2 * np.eye(8))) <= 1e-14
    assert all(check_hermitian(L, 0.0) for L in B)


def test_tabulated_lambda7_not_hermitian():
    assert not check_hermitian(gell_mann(7, printed=True))
    assert np.allclose(gell_mann(7), [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]])


def test_su3_decompose_basics():
    c = su3_decompose(np.eye(3))
    assert c.d0 == pytest.approx(1) and np.allclose(c.d, 0)
    c = su3_decompose(gell_mann(3))
    assert np.allclose(c.d, [0, 0, 1, 0, 0, 0, 0, 0])
    assert np.allclose(su3_reconstruct(GellMannCoefficients(1.0, (0,) * 8)), np.eye(3))


def test_bloch_hamiltonian_lives_on_seven_dim_subspace():
    for k in k_samples(64):
        c = su3_decompose(bloch_hamiltonian(k))
        assert abs(c.d[3]) <= 1e-12 and abs(c.d[4]) <= 1e-12


def test_round_trips(rng):
    for _ in range(100):
        H = random_hermitian(3, rng)
        assert np.max(np.abs(su3_reconstruct(su3_decompose(H)) - H)) <= 1e-12
        H2 = random_hermitian(2, rng)
        assert np.max(np.abs(su2_reconstruct(su2_decompose(H2)) - H2)) <= 1e-14


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 2**32 - 1))
def test_linearity(a, b, seed):
    rng = np.random.default_rng(seed)
    H1, H2 = random_hermitian(3, rng), random_hermitian(3, rng)
    lhs = su3_decompose(a * H1 + b * H2).as_array()
    rhs = a * su3_decompose(H1).as_array() + b * su3_decompose(H2).as_array()
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, abs(a) + abs(b)) * 10


def test_su2_basics():
    assert su2_decompose(SIGMA[0]).dx == pytest.approx(1)
    assert su2_decompose(np.eye(2)).d0 == pytest.approx(1)
    assert np.allclose(su2_reconstruct(PauliCoefficients(0, 0, 0, 1)), SIGMA[2])


def test_errors():
    with pytest.raises(DimensionError):
        su3_decompose(np.eye(2))
    with pytest.raises(NotHermitianError):
        su3_decompose(np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]]))
    with pytest.raises(ValueError):
        GellMannCoefficients(0.0, (1.0, 2.0))


def test_tabulated_coefficients_mismatch_only_in_diagonal_terms():
    assert np.max(np.abs(su3_reconstruct(tabulated_coefficients(0.0)) - bloch_hamiltonian(0.0))) <= 1e-14
    for k in (0.5, np.pi / 2, np.pi):
        diff = su3_decompose(bloch_hamiltonian(k)).as_array() - tabulated_coefficients(k).as_array()
        off = np.delete(diff, [3, 8])          # all but Lambda_3, Lambda_8
        assert np.max(np.abs(off)) <= 1e-12
        assert abs(diff[3]) > 1e-2 and abs(diff[8]) > 1e-2
