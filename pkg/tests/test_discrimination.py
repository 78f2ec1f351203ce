import math

import numpy as np
import pytest

from helstrom.models.discrimination import (
    BinaryPovm,
    canonicalize,
    detector_from_dict,
    error_rate,
    helstrom_bound,
    helstrom_detector,
    response,
    sample_povm,
)
from helstrom.models.errors import BallViolation, DegenerateScenario, InvalidDetector
from helstrom.models.qubit import BlochVector, bloch_to_density, density_to_bloch, DensityMatrix
from tests.conftest import random_pair, random_unitary


@pytest.mark.parametrize(
    "r0, r1, expected",
    [
        ((0, 0, 1), (0, 0, -1), 0.0),
        ((0, 0, 1), (1, 0, 0), 0.5 - math.sqrt(2) / 4),
        ((0.8, 0, 0), (-0.8, 0, 0), 0.1),
        ((0.2, 0.1, 0), (0.2, 0.1, 0), 0.5),
    ],
)
def test_helstrom_bound_examples(r0, r1, expected):
    assert helstrom_bound(BlochVector(*r0), BlochVector(*r1)) == pytest.approx(expected, abs=1e-15)


def test_helstrom_bound_checks_the_ball():
    with pytest.raises(BallViolation):
        helstrom_bound(BlochVector(0, 0, 1.5), BlochVector(0, 0, 0))


def test_helstrom_detector_attains_bound(rng):
    for _ in range(10_000):
        r0, r1 = random_pair(rng)
        detector = helstrom_detector(r0, r1)
        assert error_rate(detector, r0, r1) == pytest.approx(helstrom_bound(r0, r1), abs=1e-12)


def test_helstrom_detector_for_antipodal_states():
    detector = helstrom_detector(BlochVector(0, 0, 1), BlochVector(0, 0, -1))
    assert np.allclose(detector.element0, np.diag([1, 0]), atol=1e-15)
    assert np.allclose(detector.element1, np.diag([0, 1]), atol=1e-15)


def test_helstrom_detector_for_orthogonal_axes():
    detector = helstrom_detector(BlochVector(1, 0, 0), BlochVector(0, 0, 1))
    n = np.array([1, 0, -1]) / math.sqrt(2)
    expected = bloch_to_density(BlochVector.from_sequence(n)).matrix
    assert np.allclose(detector.element0, expected, atol=1e-12)


def test_helstrom_detector_needs_distinct_states():
    with pytest.raises(DegenerateScenario):
        helstrom_detector(BlochVector(0.1, 0, 0), BlochVector(0.1, 0, 0))


def test_no_detector_beats_the_helstrom_bound(rng):
    detectors = [sample_povm(rng) for _ in range(10_000)]
    params = [d.parameters for d in detectors]
    a = np.array([p[0] for p in params])
    b = np.array([p[1] for p in params])

    r0, r1 = random_pair(rng)
    for d, expected in zip(detectors[:100], 0.5 * (1 - (a + b @ r0.array) + (a + b @ r1.array))):
        assert error_rate(d, r0, r1) == pytest.approx(expected, abs=1e-12)

    for _ in range(100):
        r0, r1 = random_pair(rng)
        errors = 0.5 * (1 - (a + b @ r0.array) + (a + b @ r1.array))
        assert errors.min() >= helstrom_bound(r0, r1) - 1e-12


def test_sampled_detectors_are_valid(rng):
    for _ in range(1000):
        sample_povm(rng).validate()


def test_response_examples():
    up = bloch_to_density(BlochVector(0, 0, 1))
    plus = bloch_to_density(BlochVector(1, 0, 0))
    z_detector = BinaryPovm.from_elements(np.diag([1, 0]))
    assert response(z_detector, up).to_dict() == {"p0": 1.0, "p1": 0.0}
    assert response(z_detector, plus).p0 == pytest.approx(0.5)
    assert response(BinaryPovm.random_guess(), up)[1] == pytest.approx(0.5)


@pytest.mark.parametrize(
    "detector, state, expected",
    [
        (BinaryPovm.from_parameters(0.5, [0.5, 0, 0]), (0.8, 0, 0), (0.9, 0.1)),
        (BinaryPovm.from_parameters(0.5, [-0.5, 0, 0]), (0.8, 0, 0), (0.1, 0.9)),
        (BinaryPovm.from_parameters(0.5, [0, 0, 0.5]), (0.8, 0, 0), (0.5, 0.5)),
        (BinaryPovm.from_parameters(0.5, [0.5, 0, 0]), (-0.6, 0, 0), (0.2, 0.8)),
    ],
)
def test_projector_response_table(detector, state, expected):
    result = response(detector, bloch_to_density(BlochVector(*state)))
    assert (result.p0, result.p1) == pytest.approx(expected, abs=1e-12)


def test_constant_detectors():
    rho = bloch_to_density(BlochVector(0.3, -0.2, 0.5))
    assert response(BinaryPovm.constant(0), rho).p0 == pytest.approx(1.0)
    assert response(BinaryPovm.constant(1), rho).p1 == pytest.approx(1.0)


def test_error_rate_examples():
    r0, r1 = BlochVector(0, 0, 1), BlochVector(0, 0, -1)
    assert error_rate(helstrom_detector(r0, r1), r0, r1) == pytest.approx(0.0, abs=1e-15)
    assert error_rate(BinaryPovm.random_guess(), r0, r1) == pytest.approx(0.5)
    assert error_rate(BinaryPovm.constant(0), r0, r1) == pytest.approx(0.5)
    assert error_rate(helstrom_detector(r0, r1).swapped(), r0, r1) == pytest.approx(1.0)


def test_canonicalize_swaps_inverted_detectors():
    r0, r1 = BlochVector(0.8, 0, 0), BlochVector(-0.8, 0, 0)
    inverted = helstrom_detector(r0, r1).swapped()
    fixed = canonicalize(inverted, r0, r1)
    assert response(fixed, bloch_to_density(r0)).p0 >= response(fixed, bloch_to_density(r1)).p0
    assert error_rate(fixed, r0, r1) == pytest.approx(0.1)
    assert canonicalize(fixed, r0, r1) is fixed


def test_unitary_covariance(rng):
    for _ in range(200):
        r0, r1 = random_pair(rng)
        d = sample_povm(rng)
        u = random_unitary(rng)

        def rotate(v: BlochVector) -> BlochVector:
            m = bloch_to_density(v).matrix
            return density_to_bloch(DensityMatrix(u @ m @ u.conj().T))

        rotated = error_rate(d.conjugated(u), rotate(r0), rotate(r1))
        assert rotated == pytest.approx(error_rate(d, r0, r1), abs=1e-12)


def test_invalid_detector_is_rejected():
    with pytest.raises(InvalidDetector):
        BinaryPovm.from_parameters(0.5, [0.6, 0, 0]).validate()
    with pytest.raises(InvalidDetector):
        BinaryPovm.from_elements(np.diag([1, 0]), np.diag([1, 0])).validate()


def test_detector_documents():
    r0, r1 = BlochVector(0, 0, 1), BlochVector(0, 0, -1)
    povm = detector_from_dict({"kind": "povm", "a": 0.5, "b": [0, 0, 0.5]})
    assert np.allclose(povm.element0, np.diag([1, 0]))

    helstrom = detector_from_dict({"kind": "helstrom"}, r0, r1)
    assert error_rate(helstrom, r0, r1) == pytest.approx(0.0, abs=1e-15)

    a, b = detector_from_dict(povm.to_dict()).parameters
    assert a == pytest.approx(0.5)
    assert b.tolist() == pytest.approx([0, 0, 0.5])


@pytest.mark.parametrize(
    "document",
    [
        {"kind": "lens"},
        {"kind": "helstrom"},
        {"kind": "povm", "a": 0.5},
        {"kind": "povm", "a": 0.5, "b": [0, 0]},
        {"kind": "povm", "a": 0.2, "b": [0, 0, 0.5]},
    ],
)
def test_malformed_detector_documents(document):
    with pytest.raises(InvalidDetector):
        detector_from_dict(document)
