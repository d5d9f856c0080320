import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import SX, SY, SZ, ginibre_density, haar_unitary
from probframe import matcore
from probframe.errors import HermiticityError, NegativityError, NormError, ShapeError, TraceError


def test_projector_of_basis_and_superpositions():
    assert np.allclose(matcore.projector_of([1, 0]), [[1, 0], [0, 0]])
    r = 2**-0.5
    assert np.allclose(matcore.projector_of([r, r]), [[0.5, 0.5], [0.5, 0.5]])
    assert np.allclose(matcore.projector_of([r, 1j * r]), [[0.5, -0.5j], [0.5j, 0.5]])


def test_projector_of_rejects_non_unit():
    with pytest.raises(NormError):
        matcore.projector_of([1, 1])


def test_tensor_product_examples(rng):
    assert np.allclose(matcore.tensor_product(np.eye(2), np.eye(2)), np.eye(4))
    assert np.allclose(matcore.tensor_product(SZ, SZ), np.diag([1, -1, -1, 1]))
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert np.isclose(np.trace(matcore.tensor_product(a, b)), np.trace(a) * np.trace(b))


def test_trace_inner():
    assert matcore.trace_inner(SX, SX) == pytest.approx(2)
    assert matcore.trace_inner(SX, SY) == pytest.approx(0)
    e12 = matcore.unit_matrix(2, 0, 1)
    assert matcore.trace_inner(e12, e12, conjugated=True) == pytest.approx(1)
    assert matcore.trace_inner(e12, e12, conjugated=False) == pytest.approx(0)
    with pytest.raises(ShapeError):
        matcore.trace_inner(np.eye(2), np.eye(3))


def test_hermitian_pair_basis_small():
    assert np.allclose(matcore.hermitian_pair_basis(1), [[[1]]])
    e11, e22, hp, hm = matcore.hermitian_pair_basis(2)
    e12, e21 = matcore.unit_matrix(2, 0, 1), matcore.unit_matrix(2, 1, 0)
    assert np.allclose(e11, [[1, 0], [0, 0]])
    assert np.allclose(e22, [[0, 0], [0, 1]])
    assert np.allclose(hp, (e21 + e12) / 2)
    assert np.allclose(hm, 1j * (e21 - e12) / 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_hermitian_pair_basis_is_hermitian_and_spanning(n):
    basis = matcore.hermitian_pair_basis(n)
    assert len(basis) == n * n
    for b in basis:
        assert np.allclose(b, b.conj().T)
    flat = np.array([np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in basis])
    assert np.linalg.matrix_rank(flat) == n * n


def test_coords_examples():
    assert np.allclose(matcore.herm_to_coords(np.eye(2)), [1, 1, 0, 0])
    assert np.allclose(matcore.herm_to_coords(SX), [0, 0, 1, 0])


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_coords_round_trip_on_random_hermitian(n, rng):
    worst = 0.0
    for _ in range(100):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = (a + a.conj().T) / 2
        worst = max(worst, np.max(np.abs(matcore.coords_to_herm(matcore.herm_to_coords(h)) - h)))
    assert worst < 1e-14


@pytest.mark.parametrize("n", [2, 3, 4])
def test_coords_metric_is_the_trace_inner_product(n, rng):
    k = matcore.coords_metric(n)
    for _ in range(10):
        a, b = (ginibre_density(n, rng) for _ in range(2))
        lhs = matcore.herm_to_coords(a) @ k @ matcore.herm_to_coords(b)
        assert lhs == pytest.approx(np.trace(a @ b).real, abs=1e-12)


def test_validate_density_examples():
    matcore.validate_density(np.eye(2) / 2)
    with pytest.raises(TraceError) as info:
        matcore.validate_density(np.eye(2))
    assert info.value.residual == pytest.approx(1.0)
    with pytest.raises(NegativityError) as info:
        matcore.validate_density(np.diag([1.2, -0.2]))
    assert info.value.residual == pytest.approx(-0.2)  # the offending eigenvalue
    with pytest.raises(HermiticityError):
        matcore.validate_density([[0.5, 0.1], [0.0, 0.5]])


def test_validate_density_reports_every_violation():
    with pytest.raises(TraceError) as info:
        matcore.validate_density(np.diag([2.0, -0.5]))
    kinds = dict(info.value.violations)
    assert kinds.keys() == {"trace", "negativity"}
    assert kinds["negativity"] == pytest.approx(-0.5)


def test_validate_density_sweep(rng):
    for _ in range(100):
        matcore.validate_density(ginibre_density(3, rng))


def test_validated_copy_is_read_only():
    rho = matcore.validate_density(np.eye(2) / 2)
    with pytest.raises(ValueError):
        rho[0, 0] = 1


def test_unitarity_residual_sweep(rng):
    assert max(matcore.unitarity_residual(haar_unitary(4, rng)) for _ in range(100)) < 1e-12
    assert not matcore.is_unitary(np.diag([1, 2]))


def test_embed_operator_matches_kron_on_adjacent_targets():
    h = np.array([[1, 1], [1, -1]]) / 2**0.5
    assert np.allclose(matcore.embed_operator(h, [1], 3), np.kron(np.kron(np.eye(2), h), np.eye(2)))


def test_embed_operator_reversed_targets_swaps_roles():
    # cnot with control 1, target 0 on two qubits
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    reversed_cnot = matcore.embed_operator(cnot, [1, 0], 2)
    expected = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]])
    assert np.allclose(reversed_cnot, expected)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_herm_coords_are_linear(n, seed):
    rng = np.random.default_rng(seed)
    a, b = (matcore.coords_to_herm(rng.normal(size=n * n)) for _ in range(2))
    alpha, beta = rng.normal(size=2)
    lhs = matcore.herm_to_coords(alpha * a + beta * b)
    rhs = alpha * matcore.herm_to_coords(a) + beta * matcore.herm_to_coords(b)
    assert np.allclose(lhs, rhs, atol=1e-12)
