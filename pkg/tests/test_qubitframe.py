import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import SIGMA, bell_density, ginibre_density, kron_all, pauli_params, six_state_probs
from probframe import frame, matcore, qubitframe
from probframe.errors import InconsistentProbabilities, NegativityError, ShapeError


def bell_tensor():
    return pauli_params(bell_density())


def test_six_index_order():
    order = [qubitframe.six_index(mu, theta) for mu in (1, 2, 3) for theta in (0, 1)]
    assert order == list(range(6))
    assert qubitframe.SIX_STATE_LABELS == ("0x", "1x", "0y", "1y", "0z", "1z")


def test_pauli_string_examples():
    assert np.allclose(qubitframe.pauli_string((0,)), np.eye(2))
    assert np.allclose(qubitframe.pauli_string((3, 3)), np.diag([1, -1, -1, 1]))
    s12, s21 = qubitframe.pauli_string((1, 2)), qubitframe.pauli_string((2, 1))
    assert np.trace(s12 @ s12) == pytest.approx(4)
    assert np.trace(s12 @ s21) == pytest.approx(0)


def test_pauli_strings_are_trace_orthogonal():
    strings = qubitframe.all_pauli_strings(2).reshape(16, 4, 4)
    gram = np.einsum("aij,bji->ab", strings, strings)
    assert np.allclose(gram, 4 * np.eye(16))


def test_six_state_kets_are_eigenvectors():
    pset = qubitframe.six_state_set(1)
    for label, ket in zip(pset.ket_labels, pset.kets):
        theta, axis = int(label[0]), "xyz".index(label[1]) + 1
        assert np.allclose(SIGMA[axis] @ ket, (-1) ** theta * ket)


def test_six_state_set_three_qubits():
    pset = qubitframe.six_state_set(3)
    assert len(pset) == 216
    assert frame.rank_of_projector_span(pset) == 64


def test_tilde_from_rho_examples():
    assert np.allclose(qubitframe.tilde_from_rho(np.diag([1, 0])), [1, 0, 0, 1])
    t = qubitframe.tilde_from_rho(np.eye(4) / 4)
    expected = np.zeros((4, 4))
    expected[0, 0] = 1
    assert np.allclose(t, expected)
    with pytest.raises(ShapeError):
        qubitframe.tilde_from_rho(np.eye(3) / 3)


def test_bell_tensor():
    t = qubitframe.tilde_from_rho(bell_density())
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[1, 1] = expected[3, 3] = 1
    expected[2, 2] = -1
    assert np.allclose(t, expected, atol=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_tilde_from_rho_matches_oracle(m, rng):
    rho = ginibre_density(2**m, rng)
    assert np.allclose(qubitframe.tilde_from_rho(rho), pauli_params(rho), atol=1e-12)


def test_rho_from_tilde_examples():
    assert np.allclose(qubitframe.rho_from_tilde([1, 0, 0, 0]), np.eye(2) / 2)
    assert np.allclose(qubitframe.rho_from_tilde([1, 0, 0, 1]), np.diag([1, 0]))
    unphysical = qubitframe.rho_from_tilde([1, 0, 0, 2])
    assert np.trace(unphysical) == pytest.approx(1)
    with pytest.raises(NegativityError):
        matcore.validate_density(unphysical)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_rho_tilde_round_trip(m, rng):
    rho = ginibre_density(2**m, rng)
    t = qubitframe.tilde_from_rho(rho)
    assert np.allclose(qubitframe.rho_from_tilde(t), rho, atol=1e-12)
    assert np.allclose(qubitframe.tilde_from_rho(qubitframe.rho_from_tilde(t)), t, atol=1e-12)


def test_p_from_tilde_single_qubit():
    p = dict(zip(qubitframe.SIX_STATE_LABELS, qubitframe.p_from_tilde([1, 0, 0, 1])))
    assert p == pytest.approx({"0z": 1, "1z": 0, "0x": 0.5, "1x": 0.5, "0y": 0.5, "1y": 0.5})


def test_bell_zz_probabilities():
    p = qubitframe.p_from_tilde(bell_tensor())
    z0, z1 = qubitframe.six_index(3, 0), qubitframe.six_index(3, 1)
    assert p[z0, z0] == pytest.approx(0.5)
    assert p[z1, z1] == pytest.approx(0.5)
    assert p[z0, z1] == pytest.approx(0, abs=1e-12)
    assert p[z1, z0] == pytest.approx(0, abs=1e-12)


def test_product_tensor_probabilities_factorize():
    a, b = np.array([1.0, 0, 0, 1]), np.array([1.0, 1, 0, 0])
    p = qubitframe.p_from_tilde(qubitframe.product_tensor([a, b]))
    assert np.allclose(p, np.multiply.outer(qubitframe.p_from_tilde(a), qubitframe.p_from_tilde(b)))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_p_from_tilde_matches_six_state_oracle(m, rng):
    rho = ginibre_density(2**m, rng)
    assert np.allclose(qubitframe.p_from_tilde(pauli_params(rho)), six_state_probs(rho), atol=1e-12)


def test_tilde_from_p_bell_zz_component():
    p = six_state_probs(bell_density())
    z0, z1 = qubitframe.six_index(3, 0), qubitframe.six_index(3, 1)
    by_hand = p[z0, z0] - p[z0, z1] - p[z1, z0] + p[z1, z1]
    for policy in qubitframe.POLICIES:
        t = qubitframe.tilde_from_p(p, policy)
        assert t[3, 3] == pytest.approx(1)
        assert t[3, 3] == pytest.approx(by_hand)
        assert t[0, 0] == pytest.approx(1)


def test_outcome_sums_are_one_for_every_axis_pair(rng):
    p = six_state_probs(ginibre_density(4, rng))
    assert np.allclose(qubitframe.outcome_sums(p), np.ones((3, 3)))


def test_inconsistent_probabilities_report_worst_group():
    p = np.full((6, 6), 0.25)
    p[qubitframe.six_index(2, 0), qubitframe.six_index(1, 1)] += 0.1
    with pytest.raises(InconsistentProbabilities) as info:
        qubitframe.tilde_from_p(p)
    assert info.value.axes == (2, 1)
    assert info.value.total == pytest.approx(1.1)


def test_unknown_policy():
    with pytest.raises(ValueError):
        qubitframe.tilde_from_p(np.full(6, 0.5), "majority")


def test_policies_agree_on_physical_data():
    p = qubitframe.p_from_tilde([1, 0.2, -0.1, 0.4])
    assert np.allclose(qubitframe.tilde_from_p(p, "canonical_z"), qubitframe.tilde_from_p(p, "average"))


def test_policies_differ_when_a_marginal_depends_on_the_other_axis():
    # normalized in every axis pair, but qubit 1's z statistics depend on
    # whether qubit 0 was measured along z or not
    p = np.full((6, 6), 0.25)
    for mu0 in (1, 2):
        for theta0 in (0, 1):
            p[qubitframe.six_index(mu0, theta0), qubitframe.six_index(3, 0)] = 0.5
            p[qubitframe.six_index(mu0, theta0), qubitframe.six_index(3, 1)] = 0.0
    assert qubitframe.tilde_from_p(p, "canonical_z")[0, 3] == pytest.approx(0)
    assert qubitframe.tilde_from_p(p, "average")[0, 3] == pytest.approx(2 / 3)


def test_marginals_of_product_state():
    t = qubitframe.product_tensor([np.array([1.0, 0, 0, 1]), np.array([1.0, 1, 0, 0])])
    table = qubitframe.marginals(t)
    assert table.probabilities[0, 2, 0] == pytest.approx(1)  # qubit 0, z axis, outcome 0
    assert table.probabilities[1, 0, 0] == pytest.approx(1)  # qubit 1, x axis, outcome 0
    assert np.allclose(table.probabilities.sum(axis=2), 1)


def test_bell_marginals_are_unbiased():
    table = qubitframe.marginals(bell_tensor())
    assert np.allclose(table.probabilities, 0.5)
    assert np.allclose(table.parameters[:, 1:], 0)


def test_marginals_match_partial_trace(rng):
    rho = ginibre_density(8, rng)
    t = pauli_params(rho)
    table = qubitframe.marginals(t)
    p = six_state_probs(rho)
    reduced = np.einsum("abcade->bcde", rho.reshape(2, 2, 2, 2, 2, 2))  # trace out qubit 0
    reduced_1 = np.einsum("bcbd->cd", reduced.reshape(2, 2, 2, 2))  # then qubit 1
    assert np.allclose(table.parameters[2], pauli_params(reduced_1), atol=1e-12)
    for k in range(3):
        assert np.allclose(qubitframe.marginals_from_p(p, k), table.probabilities[k], atol=1e-12)
        assert np.allclose(qubitframe.marginals_from_p(p, k, [1, 2, 1]), table.probabilities[k], atol=1e-12)


def test_product_tensor_examples():
    t = qubitframe.product_tensor([np.array([1.0, 0, 0, 0])] * 3)
    assert t[0, 0, 0] == 1 and np.count_nonzero(t) == 1
    t = qubitframe.product_tensor([np.array([1.0, 0, 0, 1])] * 2)
    assert t[3, 3] == t[3, 0] == t[0, 3] == 1


def test_product_tensor_matches_kron_oracle(rng):
    worst = 0.0
    for _ in range(50):
        r1, r2 = ginibre_density(2, rng), ginibre_density(4, rng)
        lhs = qubitframe.tilde_from_rho(np.kron(r1, r2))
        rhs = qubitframe.product_tensor([qubitframe.tilde_from_rho(r1), qubitframe.tilde_from_rho(r2)])
        worst = max(worst, np.max(np.abs(lhs - rhs)))
    assert worst < 1e-12


def test_is_product_on_bell():
    result = qubitframe.is_product(bell_tensor(), 1)
    assert not result.is_product
    assert result.singular_values[1] == pytest.approx(1)


def test_is_product_recovers_factors(rng):
    parts = [pauli_params(ginibre_density(2, rng)) for _ in range(3)]
    t = qubitframe.product_tensor(parts)
    for cut in (1, 2):
        result = qubitframe.is_product(t, cut)
        assert result.is_product
        assert np.allclose(np.multiply.outer(*result.factors), t, atol=1e-12)


def test_is_product_tolerance_on_nearly_product_state():
    zero = np.diag([1.0, 0])
    rho = 0.99 * np.kron(zero, zero) + 0.01 * bell_density()
    t = pauli_params(rho)
    assert not qubitframe.is_product(t, 1, tol=1e-6).is_product
    assert qubitframe.is_product(t, 1, tol=0.1).is_product


def test_is_product_cut_range():
    with pytest.raises(ValueError):
        qubitframe.is_product(bell_tensor(), 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1), st.sampled_from(qubitframe.POLICIES))
def test_probability_round_trip_on_physical_tensors(m, seed, policy):
    rng = np.random.default_rng(seed)
    t = pauli_params(ginibre_density(2**m, rng))
    back = qubitframe.tilde_from_p(qubitframe.p_from_tilde(t), policy)
    assert np.max(np.abs(back - t)) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_single_qubit_pauli_string_layout(seed):
    # qubit 0 is the most significant tensor factor
    rng = np.random.default_rng(seed)
    nu = tuple(int(x) for x in rng.integers(0, 4, size=3))
    assert np.allclose(qubitframe.pauli_string(nu), kron_all([SIGMA[k] for k in nu]))
