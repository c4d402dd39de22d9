import numpy as np
import pytest
from hypothesis import given, strategies as st

from multiportlab.core import check_unitary
from multiportlab.errors import DimensionError
from multiportlab.multiport import (MultiportKind, MultiportSpec, eigensystem, exit_probabilities,
                                    grover_unitary, multiport_unitary, resolve_port, strict_three_port)

from conftest import GROVER3


def test_grover_three_closed_form():
    assert np.max(np.abs(grover_unitary(3) - GROVER3)) <= 1e-14


def test_grover_four_is_balanced():
    assert np.allclose(np.abs(grover_unitary(4)), 0.5, atol=1e-14)
    assert np.allclose(exit_probabilities(grover_unitary(4), 2).probabilities, 0.25, atol=1e-14)


def test_grover_mirror_limit():
    p = exit_probabilities(grover_unitary(100), 0).probabilities
    assert abs(p[0] - 0.9604) < 1e-12


@given(st.integers(2, 40))
def test_grover_unitary_any_n(n):
    assert check_unitary(grover_unitary(n), 1e-12)


def test_grover_rejects_small_n():
    with pytest.raises(ValueError):
        grover_unitary(1)


def test_strict_three_port():
    U = strict_three_port()
    assert check_unitary(U, 1e-12)
    assert np.allclose(np.diag(U), 1 / np.sqrt(3), atol=1e-15)
    for port in "ABC":
        assert np.allclose(exit_probabilities(U, port).probabilities, 1 / 3, atol=1e-14)


def test_exit_probabilities():
    d = exit_probabilities(grover_unitary(3), "A")
    assert d.input_port == 0
    assert np.allclose(d.probabilities, [1 / 9, 4 / 9, 4 / 9], atol=1e-14)
    assert np.allclose(exit_probabilities(np.eye(3), "B").probabilities, [0, 1, 0])


def test_resolve_port():
    assert resolve_port("C", 3) == 2
    assert resolve_port(1, 4) == 1
    with pytest.raises(DimensionError):
        resolve_port(3, 3)
    with pytest.raises(DimensionError):
        resolve_port("D", 3)


def test_eigensystem_grover():
    pairs = eigensystem(grover_unitary(3))
    vals = sorted(np.round([v for v, _ in pairs], 12), key=lambda z: z.imag)
    assert np.allclose(vals, [-1j, -1j, 1j], atol=1e-10)
    plus = [vec for val, vec in pairs if abs(val - 1j) < 1e-10]
    assert len(plus) == 1
    assert abs(abs(np.vdot(plus[0], np.ones(3) / np.sqrt(3))) - 1) < 1e-12


def test_eigensystem_orthonormal_and_deterministic():
    a = eigensystem(grover_unitary(5))
    b = eigensystem(grover_unitary(5))
    V = np.column_stack([v for _, v in a])
    assert np.allclose(V.conj().T @ V, np.eye(5), atol=1e-12)
    assert all(np.array_equal(x[1], y[1]) for x, y in zip(a, b))


def test_eigensystem_identity():
    assert all(abs(v - 1) < 1e-12 for v, _ in eigensystem(np.eye(3)))


def test_spec_validation():
    with pytest.raises(ValueError):
        MultiportSpec(4, MultiportKind.STRICT_THREE)
    with pytest.raises(ValueError):
        MultiportSpec(3, "custom", (0.1, 0.2))
    assert np.allclose(multiport_unitary(MultiportSpec(3)), GROVER3)
    assert np.allclose(multiport_unitary(MultiportSpec(3, "strict_three")), strict_three_port())


def test_custom_node_is_unitary():
    U = multiport_unitary(MultiportSpec(3, "custom", (0.3, -1.1, 2.0)))
    assert check_unitary(U, 1e-10)
