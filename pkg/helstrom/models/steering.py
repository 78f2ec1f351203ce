"""
Ensemble Steering

Alice holds the purification of Bob's average state rho_B. By choosing which
POVM she applies to her qubit she decides which decomposition of rho_B Bob
ends up with, without changing rho_B itself.

Conventions: the joint state is stored as a 2x2 amplitude matrix M[a, b] over
|a>_A |b>_B, and every transpose is taken in the computational basis.
"""

from typing import Dict, List, Optional, Sequence, Tuple
from dataclasses import dataclass, field
import logging
import math

import numpy as np

from ..config import TOLERANCES
from .errors import MismatchedAverage, NearSingularAverage, ZeroProbability
from .qubit import (
    IDENTITY,
    DensityMatrix,
    Operator,
    as_matrix,
    eig2,
    matrix_to_json,
    sqrtm_psd,
    trace_norm_distance,
)
from .scenario import Scenario

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class JointPureState:
    """Two-qubit pure state, amplitudes ordered |00>, |01>, |10>, |11> (Alice first)"""
    amplitudes: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        """M[a, b] = <a|_A <b|_B |psi>"""
        return np.asarray(self.amplitudes, dtype=complex).reshape(2, 2)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def bob_marginal(self) -> DensityMatrix:
        m = self.matrix
        return DensityMatrix(m.T @ m.conj())

    def alice_marginal(self) -> DensityMatrix:
        m = self.matrix
        return DensityMatrix(m @ m.conj().T)

    def with_alice_unitary(self, unitary: np.ndarray) -> "JointPureState":
        """(U tensor I)|psi>"""
        u = np.asarray(unitary, dtype=complex)
        return JointPureState(amplitudes=(u @ self.matrix).reshape(4))

    def to_dict(self) -> Dict:
        return {"amplitudes": [[float(np.real(c)), float(np.imag(c))] for c in self.amplitudes]}


@dataclass(frozen=True, eq=False)
class SteeringOutcome:
    """One element of Alice's measurement and the Bob state it prepares"""
    element: np.ndarray
    target_weight: float
    target_state: DensityMatrix

    def to_dict(self) -> Dict:
        return {
            "element": matrix_to_json(self.element),
            "target_weight": self.target_weight,
            "target_state": self.target_state.to_json_matrix(),
        }


@dataclass(frozen=True, eq=False)
class SteeringMeasurement:
    """Alice's POVM together with the decomposition it steers Bob into"""
    outcomes: List[SteeringOutcome] = field(default_factory=list)

    @property
    def elements(self) -> List[np.ndarray]:
        return [outcome.element for outcome in self.outcomes]

    def completeness_residual(self) -> float:
        return float(np.max(np.abs(sum(self.elements) - IDENTITY)))

    def min_eigenvalue(self) -> float:
        return min(eig2(element).values[1] for element in self.elements)

    def outcome_statistics(self, psi: JointPureState) -> List[Tuple[float, DensityMatrix]]:
        return [conditional_state(psi, element) for element in self.elements]

    def steering_errors(self, psi: JointPureState) -> List[Tuple[float, float]]:
        """Per outcome: (|prob - target_weight|, trace distance to target_state)"""
        errors = []
        for outcome in self.outcomes:
            prob, state = conditional_state(psi, outcome.element)
            errors.append((abs(prob - outcome.target_weight), trace_norm_distance(state, outcome.target_state)))
        return errors

    def unconditioned_state(self, psi: JointPureState) -> DensityMatrix:
        """sum_k prob_k * state_k, i.e. what Bob holds if he ignores Alice"""
        total = np.zeros((2, 2), dtype=complex)
        for element in self.elements:
            total = total + _unnormalized_conditional(psi, element)
        return DensityMatrix(total)

    def rotated(self, unitary: np.ndarray) -> "SteeringMeasurement":
        """Elements conjugated by Alice's local unitary, targets unchanged"""
        u = np.asarray(unitary, dtype=complex)
        return SteeringMeasurement(
            outcomes=[
                SteeringOutcome(
                    element=u @ outcome.element @ u.conj().T,
                    target_weight=outcome.target_weight,
                    target_state=outcome.target_state,
                )
                for outcome in self.outcomes
            ]
        )

    def to_dict(self) -> Dict:
        return {"outcomes": [outcome.to_dict() for outcome in self.outcomes]}


def purify(rho_b: DensityMatrix, alice_unitary: Optional[np.ndarray] = None) -> JointPureState:
    """
    |psi> = sum_i |i>_A (sqrt(rho_B)|i>)_B, optionally followed by a local
    unitary on Alice's side. Bob's marginal is rho_B either way.
    """
    rho_b.validate()
    root = sqrtm_psd(rho_b)
    psi = JointPureState(amplitudes=root.T.reshape(4).copy())
    if alice_unitary is not None:
        psi = psi.with_alice_unitary(alice_unitary)
    return psi


def _unnormalized_conditional(psi: JointPureState, element: Operator) -> np.ndarray:
    """Tr_A[(E tensor I)|psi><psi|] = M^T E^T conj(M)"""
    m = psi.matrix
    return m.T @ as_matrix(element).T @ m.conj()


def conditional_state(psi: JointPureState, element: Operator) -> Tuple[float, DensityMatrix]:
    """Outcome probability of Alice's element and the state Bob is left with"""
    unnormalized = _unnormalized_conditional(psi, element)
    prob = float(np.real(np.trace(unnormalized)))
    if prob < TOLERANCES.zero_probability:
        raise ZeroProbability(f"Outcome probability {prob:.3e} is too small to condition on")
    # symmetrize away rounding so the result is exactly Hermitian
    state = (unnormalized + unnormalized.conj().T) / (2 * prob)
    return min(prob, 1.0), DensityMatrix(state)


def steering_measurement(psi: JointPureState,
                         components: Sequence[Tuple[float, DensityMatrix]]) -> SteeringMeasurement:
    """
    Alice's POVM realizing the decomposition `components` of Bob's marginal:
    element_k = (w_k rho_B^(-1/2) sigma_k rho_B^(-1/2))^T.
    """
    rho_b = psi.bob_marginal()
    spectrum = eig2(rho_b)
    if spectrum.values[1] < TOLERANCES.near_singular:
        raise NearSingularAverage(
            f"Bob's marginal has smallest eigenvalue {spectrum.values[1]:.3e}; cannot invert"
        )

    average = sum(weight * as_matrix(state) for weight, state in components)
    mismatch = trace_norm_distance(average, rho_b)
    if mismatch > TOLERANCES.average_mismatch:
        raise MismatchedAverage(f"Components average to a state {mismatch:.3e} away from Bob's marginal")

    inverse_root = spectrum.apply(lambda value: 1.0 / math.sqrt(value))
    outcomes = []
    for weight, state in components:
        element = weight * (inverse_root @ as_matrix(state) @ inverse_root)
        element = (element + element.conj().T) / 2
        outcomes.append(SteeringOutcome(element=element.T, target_weight=float(weight), target_state=state))

    measurement = SteeringMeasurement(outcomes=outcomes)
    logger.debug(
        f"Steering measurement with {len(outcomes)} outcomes, completeness residual "
        f"{measurement.completeness_residual():.3e}"
    )
    return measurement


def alice_measurements(s: Scenario) -> Tuple[JointPureState, SteeringMeasurement, SteeringMeasurement]:
    """Purification of rho_B together with M0 and M1 for the scenario"""
    psi = purify(s.average)
    m0 = steering_measurement(psi, s.components(0))
    m1 = steering_measurement(psi, s.components(1))
    return psi, m0, m1


def main():
    """Example usage"""
    from .qubit import BlochVector
    from .scenario import build_scenario

    logging.basicConfig(level=logging.INFO)

    scenario = build_scenario(BlochVector(0.8, 0, 0), BlochVector(-0.8, 0, 0))
    psi, m0, m1 = alice_measurements(scenario)
    print(f"psi = {psi.amplitudes.tolist()}")
    for label, measurement in (("M0", m0), ("M1", m1)):
        for prob, state in measurement.outcome_statistics(psi):
            print(f"{label}: prob={prob:.6f} state={state.matrix.tolist()}")


if __name__ == "__main__":
    main()
