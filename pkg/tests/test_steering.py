import math

import numpy as np
import pytest

from helstrom.models.errors import MismatchedAverage, NearSingularAverage, ZeroProbability
from helstrom.models.qubit import BlochVector, DensityMatrix, bloch_to_density, eig2, trace_norm_distance
from helstrom.models.scenario import build_scenario, pure_decomposition
from helstrom.models.steering import (
    JointPureState,
    alice_measurements,
    conditional_state,
    purify,
    steering_measurement,
)
from tests.conftest import random_pair, random_unitary

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PHASE = np.diag([1, 1j])
FLIP = np.array([[0, 1], [1, 0]], dtype=complex)


def test_purification_of_maximally_mixed_state():
    psi = purify(DensityMatrix(np.eye(2) / 2))
    expected = np.array([1, 0, 0, 1]) / math.sqrt(2)
    assert np.allclose(psi.amplitudes, expected, atol=1e-15)
    assert psi.norm == pytest.approx(1.0)


@pytest.mark.parametrize(
    "diagonal, expected",
    [
        ((0.75, 0.25), (math.sqrt(0.75), 0, 0, math.sqrt(0.25))),
        ((0.25, 0.75), (math.sqrt(0.25), 0, 0, math.sqrt(0.75))),
        ((0.9, 0.1), (math.sqrt(0.9), 0, 0, math.sqrt(0.1))),
    ],
)
def test_purification_of_diagonal_states(diagonal, expected):
    psi = purify(DensityMatrix(np.diag(diagonal)))
    assert np.allclose(psi.amplitudes, expected, atol=1e-12)


def test_purification_of_pure_state_is_product():
    psi = purify(bloch_to_density(BlochVector(0, 0, 1)))
    assert np.allclose(psi.amplitudes, [1, 0, 0, 0], atol=1e-15)


def test_purification_marginals(rng):
    for _ in range(200):
        rho = bloch_to_density(BlochVector.from_sequence(rng.uniform(-0.5, 0.5, size=3)))
        psi = purify(rho)
        assert psi.norm == pytest.approx(1.0, abs=1e-12)
        assert psi.bob_marginal().allclose(rho, tol=1e-12)
        assert psi.alice_marginal().allclose(rho.transpose(), tol=1e-12)
        # Schmidt purification: both marginals share a spectrum
        assert psi.alice_marginal().eigenvalues() == pytest.approx(rho.eigenvalues(), abs=1e-12)


def test_symmetric_steering_elements(symmetric_scenario):
    psi, m0, _ = alice_measurements(symmetric_scenario)
    e_target, e_flag = m0.elements
    assert np.allclose(e_target, (10 / 9) * bloch_to_density(BlochVector(0.8, 0, 0)).matrix.T, atol=1e-12)
    assert np.allclose(e_flag, (8 / 9) * bloch_to_density(BlochVector(-1, 0, 0)).matrix.T, atol=1e-12)
    assert eig2(e_target).values == pytest.approx((1.0, 1 / 9), abs=1e-12)
    assert eig2(e_flag).values == pytest.approx((8 / 9, 0.0), abs=1e-12)
    assert m0.completeness_residual() <= 1e-12


def test_trivial_decomposition_gives_identity(symmetric_scenario):
    psi = purify(symmetric_scenario.average)
    measurement = steering_measurement(psi, [(1.0, symmetric_scenario.average)])
    assert np.allclose(measurement.elements[0], np.eye(2), atol=1e-12)


def test_spectral_decomposition_probabilities_are_eigenvalues():
    rho = bloch_to_density(BlochVector(0.3, 0.2, -0.4))
    psi = purify(rho)
    decomposition = pure_decomposition(rho)
    components = [(weight, bloch_to_density(state)) for weight, state in decomposition.terms]
    measurement = steering_measurement(psi, components)
    probabilities = [prob for prob, _ in measurement.outcome_statistics(psi)]
    assert probabilities == pytest.approx(list(rho.eigenvalues()), abs=1e-12)


def test_conditional_state_examples():
    bell = JointPureState(amplitudes=np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2))
    prob, state = conditional_state(bell, np.diag([1, 0]))
    assert prob == pytest.approx(0.5)
    assert state.allclose(np.diag([1, 0]), tol=1e-15)

    plus = np.full((2, 2), 0.5)
    prob, state = conditional_state(bell, plus)
    assert prob == pytest.approx(0.5)
    assert state.allclose(plus, tol=1e-15)


def test_conditioning_on_impossible_outcome():
    product = purify(bloch_to_density(BlochVector(0, 0, 1)))
    with pytest.raises(ZeroProbability):
        conditional_state(product, np.diag([0, 1]))


def test_mismatched_components_are_rejected(symmetric_scenario):
    psi = purify(symmetric_scenario.average)
    with pytest.raises(MismatchedAverage):
        steering_measurement(psi, [(1.0, bloch_to_density(BlochVector(0.5, 0, 0)))])


def test_pure_average_cannot_be_steered():
    up = bloch_to_density(BlochVector(0, 0, 1))
    psi = purify(up)
    with pytest.raises(NearSingularAverage):
        steering_measurement(psi, [(1.0, up)])


def test_steering_on_random_scenarios(rng):
    for _ in range(1000):
        s = build_scenario(*random_pair(rng, radius=0.99))
        psi, m0, m1 = alice_measurements(s)
        for measurement in (m0, m1):
            assert measurement.min_eigenvalue() >= -1e-12
            assert measurement.completeness_residual() <= 1e-12
            for prob_error, state_error in measurement.steering_errors(psi):
                assert prob_error <= 1e-10
                assert state_error <= 1e-10
            marginal = measurement.unconditioned_state(psi)
            assert trace_norm_distance(marginal, s.average) <= 1e-12


def test_alice_unitary_preserves_bob_marginal(rng):
    s = build_scenario(BlochVector(0.5, 0.2, 0), BlochVector(-0.1, 0.4, 0.3))
    psi, m0, _ = alice_measurements(s)
    for u in (HADAMARD, PHASE, FLIP, random_unitary(rng)):
        rotated_psi = purify(s.average, alice_unitary=u)
        assert rotated_psi.bob_marginal().allclose(s.average, tol=1e-12)

        # conjugating Alice's POVM along with her state reproduces the same steering
        rotated_m0 = m0.rotated(u)
        for (prob, state), (expected_prob, expected_state) in zip(
            rotated_m0.outcome_statistics(rotated_psi), m0.outcome_statistics(psi)
        ):
            assert prob == pytest.approx(expected_prob, abs=1e-12)
            assert trace_norm_distance(state, expected_state) <= 1e-12


def test_steering_measurement_document(symmetric_scenario):
    _, m0, _ = alice_measurements(symmetric_scenario)
    document = m0.to_dict()
    assert len(document["outcomes"]) == 2
    assert document["outcomes"][0]["target_weight"] == pytest.approx(5 / 9)
