import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zzmit import (DenseOperator, QubitRegister, embed_pauli, herm_expm,
                   identity, product_term, trace_fidelity)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture
def reg1():
    return QubitRegister([(0, 0)])


@pytest.fixture
def reg2():
    return QubitRegister([(0, 0), (0, 1)])


def test_register_rejects_duplicates():
    with pytest.raises(ValueError, match="duplicate"):
        QubitRegister([(0, 0), (0, 0)])


def test_register_dim():
    reg = QubitRegister([(0, 0), (0, 1), (1, 0)])
    assert reg.count == 3 and reg.dim == 8


def test_embed_pauli_single_qubit_z(reg1):
    op = embed_pauli(reg1, (0, 0), "z")
    assert np.allclose(op.matrix, np.diag([1, -1]))


def test_embed_pauli_big_endian(reg2):
    op = embed_pauli(reg2, (0, 0), "z")
    assert np.allclose(op.matrix, np.diag([1, 1, -1, -1]))


@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_embed_pauli_traceless_involutory(axis):
    reg = QubitRegister([(0, 0), (0, 1), (1, 1)])
    op = embed_pauli(reg, (0, 1), axis)
    assert abs(op.trace()) < 1e-12
    assert np.allclose((op @ op).matrix, np.eye(reg.dim), atol=1e-14)
    assert op.is_hermitian()


def test_embed_pauli_unknown_site(reg2):
    with pytest.raises(ValueError, match="not in register"):
        embed_pauli(reg2, (5, 5), "x")


def test_embed_pauli_bad_axis(reg1):
    with pytest.raises(ValueError, match="axis"):
        embed_pauli(reg1, (0, 0), "w")


def test_same_site_anticommute_distinct_site_commute():
    reg = QubitRegister([(0, 0), (0, 1)])
    x0 = embed_pauli(reg, (0, 0), "x")
    y0 = embed_pauli(reg, (0, 0), "y")
    z1 = embed_pauli(reg, (0, 1), "z")
    anti = x0 @ y0 + y0 @ x0
    comm = x0 @ z1 - z1 @ x0
    assert np.abs(anti.matrix).max() < 1e-12
    assert np.abs(comm.matrix).max() < 1e-12


def test_product_term_zz(reg2):
    op = product_term(reg2, [((0, 0), "z"), ((0, 1), "z")])
    assert np.allclose(op.matrix, np.diag([1, -1, -1, 1]))


def test_product_term_xy_exchange_spectrum(reg2):
    op = (product_term(reg2, [((0, 0), "x"), ((0, 1), "x")])
          + product_term(reg2, [((0, 0), "y"), ((0, 1), "y")]))
    evals = np.sort(np.linalg.eigvalsh(op.matrix))
    assert np.allclose(evals, [-2, 0, 0, 2], atol=1e-12)


def test_product_term_single_factor_is_embed(reg2):
    a = product_term(reg2, [((0, 1), "y")])
    b = embed_pauli(reg2, (0, 1), "y")
    assert np.allclose(a.matrix, b.matrix)


def test_product_term_repeated_site(reg2):
    with pytest.raises(ValueError, match="repeated site"):
        product_term(reg2, [((0, 0), "x"), ((0, 0), "y")])


def test_herm_expm_zero_angle(reg1):
    H = embed_pauli(reg1, (0, 0), "x")
    assert np.allclose(herm_expm(H, 0.0).matrix, np.eye(2))


def test_herm_expm_x_half_pi(reg1):
    H = embed_pauli(reg1, (0, 0), "x")
    assert np.allclose(herm_expm(H, np.pi / 2).matrix, -1j * SX, atol=1e-14)


def test_herm_expm_z_phases(reg1):
    H = embed_pauli(reg1, (0, 0), "z")
    theta = 0.731
    expect = np.diag([np.exp(-1j * theta), np.exp(1j * theta)])
    assert np.allclose(herm_expm(H, theta).matrix, expect, atol=1e-14)


def test_herm_expm_group_property():
    rng = np.random.default_rng(7)
    reg = QubitRegister([(0, 0), (0, 1)])
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    H = DenseOperator(reg, (A + A.conj().T) / 2)
    a, b = 0.37, -1.21
    lhs = herm_expm(H, a) @ herm_expm(H, b)
    rhs = herm_expm(H, a + b)
    assert np.abs(lhs.matrix - rhs.matrix).max() < 1e-10
    assert lhs.is_unitary()


def test_herm_expm_rejects_non_hermitian(reg1):
    M = DenseOperator(reg1, np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(ValueError, match="Hermitian"):
        herm_expm(M, 1.0)


def test_trace_fidelity_self_is_one(reg2):
    rng = np.random.default_rng(3)
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    U = herm_expm(DenseOperator(reg2, (A + A.conj().T) / 2), 0.9)
    assert trace_fidelity(U, U) == pytest.approx(1.0, abs=1e-12)


def test_trace_fidelity_orthogonal(reg1):
    assert trace_fidelity(identity(reg1), embed_pauli(reg1, (0, 0), "x")) == pytest.approx(0.0, abs=1e-14)


def test_trace_fidelity_z_rotation(reg1):
    theta = 1.234
    U = herm_expm(embed_pauli(reg1, (0, 0), "z"), theta)
    assert trace_fidelity(identity(reg1), U) == pytest.approx(abs(np.cos(theta)), abs=1e-12)


def test_trace_fidelity_register_mismatch(reg1, reg2):
    with pytest.raises(ValueError, match="register"):
        trace_fidelity(identity(reg1), identity(reg2))


@settings(max_examples=30, deadline=None)
@given(phase=st.floats(-np.pi, np.pi), angle=st.floats(-2.0, 2.0))
def test_trace_fidelity_global_phase_invariant(phase, angle):
    reg = QubitRegister([(0, 0)])
    U = herm_expm(embed_pauli(reg, (0, 0), "y"), angle)
    V = DenseOperator(reg, np.exp(1j * phase) * U.matrix)
    target = herm_expm(embed_pauli(reg, (0, 0), "x"), 0.4)
    assert trace_fidelity(target, U) == pytest.approx(trace_fidelity(target, V), abs=1e-12)
