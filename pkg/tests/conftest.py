"""Shared fixtures: seeded generators and random qubit objects."""

import numpy as np
import pytest

from helstrom.models.qubit import BlochVector
from helstrom.models.scenario import build_scenario


def random_bloch(rng: np.random.Generator, radius: float = 1.0) -> BlochVector:
    """Uniform point of the ball of the given radius"""
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    return BlochVector.from_sequence(radius * rng.uniform() ** (1.0 / 3.0) * direction)


def random_pure(rng: np.random.Generator) -> BlochVector:
    direction = rng.normal(size=3)
    return BlochVector.from_sequence(direction / np.linalg.norm(direction))


def random_pair(rng: np.random.Generator, radius: float = 1.0, min_separation: float = 1e-6):
    while True:
        r0, r1 = random_bloch(rng, radius), random_bloch(rng, radius)
        if r0.distance(r1) >= min_separation:
            return r0, r1


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def symmetric_scenario():
    """r0 = 0.8 x, r1 = -0.8 x: p = 5/9, rho_B = I/2"""
    return build_scenario(BlochVector(0.8, 0, 0), BlochVector(-0.8, 0, 0))


@pytest.fixture
def x06_scenario():
    """r0 = 0.6 x, r1 = -0.6 x: p = 0.625, no-signalling floor 0.2"""
    return build_scenario(BlochVector(0.6, 0, 0), BlochVector(-0.6, 0, 0))
