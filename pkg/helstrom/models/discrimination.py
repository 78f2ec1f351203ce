"""
Minimum-Error Discrimination

Helstrom bound for two equiprobable qubit states, the projective measurement
that attains it, and the Born-rule error rate of an arbitrary two-outcome
detector.

Every binary qubit POVM can be written element0 = a*I + b.sigma with
0 <= a <= 1 and ||b|| <= min(a, 1-a); that parametrization is used for random
sampling and serialization.
"""

from typing import Dict, Optional, Sequence, Tuple
from dataclasses import dataclass
import logging

import numpy as np

from ..config import TOLERANCES
from .errors import DegenerateScenario, InvalidDetector
from .qubit import (
    IDENTITY,
    BlochVector,
    Operator,
    as_matrix,
    bloch_to_density,
    eig2,
    operator_from_bloch,
    operator_to_bloch,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BinaryPovm:
    """Two-outcome measurement {element0, element1} on a qubit"""
    element0: np.ndarray
    element1: np.ndarray

    @classmethod
    def from_elements(cls, element0: Operator, element1: Optional[Operator] = None) -> "BinaryPovm":
        e0 = np.array(as_matrix(element0), dtype=complex)
        e1 = IDENTITY - e0 if element1 is None else np.array(as_matrix(element1), dtype=complex)
        return cls(element0=e0, element1=e1)

    @classmethod
    def from_parameters(cls, a: float, b: Sequence[float]) -> "BinaryPovm":
        """element0 = a*I + b.sigma, element1 = I - element0"""
        return cls.from_elements(operator_from_bloch(a, b))

    @classmethod
    def random_guess(cls) -> "BinaryPovm":
        return cls.from_elements(IDENTITY / 2)

    @classmethod
    def constant(cls, outcome: int = 0) -> "BinaryPovm":
        """Detector that always answers `outcome`"""
        always = cls.from_elements(IDENTITY)
        return always if outcome == 0 else always.swapped()

    @property
    def parameters(self) -> Tuple[float, np.ndarray]:
        return operator_to_bloch(self.element0)

    def swapped(self) -> "BinaryPovm":
        return BinaryPovm(element0=self.element1, element1=self.element0)

    def conjugated(self, unitary: np.ndarray) -> "BinaryPovm":
        u = np.asarray(unitary, dtype=complex)
        return BinaryPovm(
            element0=u @ self.element0 @ u.conj().T,
            element1=u @ self.element1 @ u.conj().T,
        )

    def validate(self, tol: float = TOLERANCES.algebra) -> "BinaryPovm":
        for index, element in enumerate((self.element0, self.element1)):
            if np.max(np.abs(element - element.conj().T)) > tol:
                raise InvalidDetector(f"element{index} is not Hermitian")
            high, low = eig2(element).values
            if low < -tol or high > 1.0 + tol:
                raise InvalidDetector(f"element{index} has eigenvalues ({high:.3e}, {low:.3e}) outside [0, 1]")
        if np.max(np.abs(self.element0 + self.element1 - IDENTITY)) > tol:
            raise InvalidDetector("Elements do not sum to the identity")
        return self

    def to_dict(self) -> Dict:
        a, b = self.parameters
        return {"kind": "povm", "a": a, "b": b.tolist()}


@dataclass(frozen=True)
class DetectorResponse:
    """Outcome probabilities P0(rho), P1(rho)"""
    p0: float
    p1: float

    def __getitem__(self, outcome: int) -> float:
        return (self.p0, self.p1)[outcome]

    def to_dict(self) -> Dict:
        return {"p0": self.p0, "p1": self.p1}


def _clip_probability(value: float) -> float:
    return min(max(value, 0.0), 1.0)


def helstrom_bound(r0: BlochVector, r1: BlochVector) -> float:
    """1/2 - ||rho0 - rho1||_1 / 4, which for qubits is 1/2 - ||r0 - r1|| / 4"""
    for vector in (r0, r1):
        bloch_to_density(vector)
    return 0.5 - r0.distance(r1) / 4.0


def helstrom_detector(r0: BlochVector, r1: BlochVector) -> BinaryPovm:
    """Projector onto the non-negative eigenspace of rho0 - rho1 as element0"""
    if r0.distance(r1) < TOLERANCES.degenerate:
        raise DegenerateScenario("Helstrom measurement is undefined for coincident states")

    spectrum = eig2(bloch_to_density(r0).matrix - bloch_to_density(r1).matrix)
    element0 = sum(
        spectrum.projector(index) for index, value in enumerate(spectrum.values) if value >= 0.0
    )
    return BinaryPovm.from_elements(element0)


def response(d: BinaryPovm, rho: Operator) -> DetectorResponse:
    """Born rule: P_i = tr(element_i rho)"""
    m = as_matrix(rho)
    p0 = float(np.real(np.trace(d.element0 @ m)))
    p1 = float(np.real(np.trace(d.element1 @ m)))
    return DetectorResponse(p0=_clip_probability(p0), p1=_clip_probability(p1))


def error_rate(d: BinaryPovm, r0: BlochVector, r1: BlochVector) -> float:
    """e = [P1(rho0) + P0(rho1)] / 2 for equiprobable hypotheses"""
    return 0.5 * (response(d, bloch_to_density(r0)).p1 + response(d, bloch_to_density(r1)).p0)


def canonicalize(d: BinaryPovm, r0: BlochVector, r1: BlochVector) -> BinaryPovm:
    """Swap outcome labels so that P0(rho0) >= P0(rho1)"""
    if response(d, bloch_to_density(r0)).p0 < response(d, bloch_to_density(r1)).p0:
        logger.debug("Swapping detector labels so outcome 0 favours rho0")
        return d.swapped()
    return d


def sample_povm(rng: np.random.Generator) -> BinaryPovm:
    """Uniform draw from the (a, b) parametrization of binary POVMs"""
    a = rng.uniform(0.0, 1.0)
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    radius = min(a, 1.0 - a) * rng.uniform(0.0, 1.0) ** (1.0 / 3.0)
    return BinaryPovm.from_parameters(a, radius * direction)


def detector_from_dict(document: Dict, r0: Optional[BlochVector] = None,
                       r1: Optional[BlochVector] = None) -> BinaryPovm:
    """
    Read a detector document: {"kind": "povm", "a": ..., "b": [x, y, z]} or
    {"kind": "helstrom"} (the latter needs the state pair).
    """
    kind = document.get("kind")
    if kind == "helstrom":
        if r0 is None or r1 is None:
            raise InvalidDetector("A helstrom detector document needs the states r0 and r1")
        return helstrom_detector(r0, r1)
    if kind == "povm":
        try:
            a = float(document["a"])
            b = [float(c) for c in document["b"]]
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidDetector(f"Malformed povm detector document: {e}")
        if len(b) != 3:
            raise InvalidDetector(f"Detector b needs 3 components, got {len(b)}")
        return BinaryPovm.from_parameters(a, b).validate()
    raise InvalidDetector(f"Unknown detector kind: {kind!r}")


def main():
    """Example usage"""
    logging.basicConfig(level=logging.INFO)

    r0, r1 = BlochVector(1, 0, 0), BlochVector(0, 0, 1)
    detector = helstrom_detector(r0, r1)
    print(f"Helstrom bound: {helstrom_bound(r0, r1):.6f}")
    print(f"Helstrom detector error: {error_rate(detector, r0, r1):.6f}")
    print(f"Random guess error: {error_rate(BinaryPovm.random_guess(), r0, r1):.6f}")
    print(f"Detector document: {detector.to_dict()}")


if __name__ == "__main__":
    main()
