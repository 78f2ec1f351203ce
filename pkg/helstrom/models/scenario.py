"""
Equal-Average Ensemble Scenario

Builds the two ensembles Alice can steer Bob into,

    rho_B^(0) = p rho_0 + (1-p) |delta><delta|
    rho_B^(1) = p rho_1 + (1-p) |-delta><-delta|

from the pair of states to be discriminated. Requiring both ensembles to have
the same Bloch vector fixes p = 2 / (||r0 - r1|| + 2) and the flag direction
delta_hat = (r1 - r0) / ||r1 - r0||.
"""

from typing import Dict, List, Tuple
from dataclasses import dataclass, field
import logging

import numpy as np

from ..config import TOLERANCES
from .errors import DegenerateScenario, InconsistentDocument, InvalidState
from .qubit import (
    BlochVector,
    DensityMatrix,
    bloch_to_density,
    eig2,
    pure_state_bloch,
    trace_norm_distance,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scenario:
    """The two equal-average ensembles behind the discrimination question"""
    r0: BlochVector
    r1: BlochVector
    p: float  # weight of rho_j inside ensemble j
    delta_hat: BlochVector  # flag of ensemble 0; ensemble 1 uses -delta_hat
    r_B: BlochVector  # common ensemble average

    @property
    def rho0(self) -> DensityMatrix:
        return bloch_to_density(self.r0)

    @property
    def rho1(self) -> DensityMatrix:
        return bloch_to_density(self.r1)

    @property
    def average(self) -> DensityMatrix:
        return bloch_to_density(self.r_B)

    @property
    def separation(self) -> float:
        return self.r0.distance(self.r1)

    def target(self, j: int) -> BlochVector:
        return (self.r0, self.r1)[j]

    def flag(self, j: int) -> BlochVector:
        """Bloch vector of |delta> for ensemble 0 and of |-delta> for ensemble 1"""
        return self.delta_hat if j == 0 else -self.delta_hat

    def components(self, j: int) -> List[Tuple[float, DensityMatrix]]:
        """Ensemble j as [(p, rho_j), (1-p, flag_j)]"""
        return [
            (self.p, bloch_to_density(self.target(j))),
            (1.0 - self.p, bloch_to_density(self.flag(j))),
        ]

    def ensemble(self, j: int) -> DensityMatrix:
        return DensityMatrix(sum(weight * state.matrix for weight, state in self.components(j)))

    def ensemble_bloch(self, j: int) -> BlochVector:
        return self.target(j).scale(self.p) + self.flag(j).scale(1.0 - self.p)

    def invariant_violations(self, tol: float = TOLERANCES.algebra) -> List[str]:
        """Human-readable list of broken invariants (empty when valid)"""
        problems = []
        expected_p = 2.0 / (self.separation + 2.0)
        if abs(self.p - expected_p) > tol:
            problems.append(f"p={self.p:.15g} but 2/(||r0-r1||+2)={expected_p:.15g}")
        if abs(self.delta_hat.norm - 1.0) > tol:
            problems.append(f"delta_hat has norm {self.delta_hat.norm:.15g}")
        for j in (0, 1):
            mismatch = np.max(np.abs(self.ensemble_bloch(j).array - self.r_B.array))
            if mismatch > tol:
                problems.append(f"ensemble {j} average misses r_B by {mismatch:.3e}")
        if self.r_B.norm >= 1.0:
            problems.append(f"r_B is pure (norm {self.r_B.norm:.15g})")
        return problems

    def plane_coordinates(self) -> Dict[str, List[float]]:
        """
        2-D coordinates of r0, r1, +-delta_hat and r_B in the plane spanned by
        delta_hat and r0 (or r1 when r0 is parallel to delta_hat).
        """
        e1 = self.delta_hat.array
        seed = self.r0.array - np.dot(self.r0.array, e1) * e1
        if np.linalg.norm(seed) < TOLERANCES.degenerate:
            seed = self.r1.array - np.dot(self.r1.array, e1) * e1
        if np.linalg.norm(seed) < TOLERANCES.degenerate:
            # Everything is collinear; pick any perpendicular axis
            axis = np.eye(3)[int(np.argmin(np.abs(e1)))]
            seed = axis - np.dot(axis, e1) * e1
        e2 = seed / np.linalg.norm(seed)

        def project(v: BlochVector) -> List[float]:
            return [float(np.dot(v.array, e1)), float(np.dot(v.array, e2))]

        return {
            "r0": project(self.r0),
            "r1": project(self.r1),
            "delta_plus": project(self.delta_hat),
            "delta_minus": project(-self.delta_hat),
            "r_B": project(self.r_B),
        }

    def to_dict(self) -> Dict:
        return {
            "r0": self.r0.to_list(),
            "r1": self.r1.to_list(),
            "p": self.p,
            "delta_hat": self.delta_hat.to_list(),
            "r_B": self.r_B.to_list(),
        }

    @classmethod
    def from_dict(cls, document: Dict, tol: float = TOLERANCES.document) -> "Scenario":
        """
        Read a scenario document. Only r0 and r1 are required; any other field
        present must agree with the recomputed scenario within `tol`.
        """
        try:
            r0 = BlochVector.from_sequence(document["r0"])
            r1 = BlochVector.from_sequence(document["r1"])
        except (KeyError, TypeError, ValueError) as e:
            raise InconsistentDocument(f"Scenario document needs numeric r0 and r1: {e}")

        scenario = build_scenario(r0, r1)

        if "p" in document and document["p"] is not None:
            try:
                given_p = float(document["p"])
            except (TypeError, ValueError) as e:
                raise InconsistentDocument(f"Scenario document p is not a number: {e}")
            if abs(given_p - scenario.p) > tol:
                raise InconsistentDocument(f"Document p={document['p']} disagrees with {scenario.p:.15g}")
        for key in ("delta_hat", "r_B"):
            if key in document and document[key] is not None:
                try:
                    given = np.array(document[key], dtype=float)
                except (TypeError, ValueError) as e:
                    raise InconsistentDocument(f"Scenario document {key} is not numeric: {e}")
                expected = getattr(scenario, key).array
                if given.shape != (3,) or np.max(np.abs(given - expected)) > tol:
                    raise InconsistentDocument(f"Document {key}={document[key]} disagrees with {expected.tolist()}")
        return scenario


@dataclass(frozen=True)
class PureDecomposition:
    """Convex combination of pure states: [(weight, unit Bloch vector)]"""
    terms: List[Tuple[float, BlochVector]] = field(default_factory=list)

    @property
    def weights(self) -> List[float]:
        return [weight for weight, _ in self.terms]

    def reconstruct(self) -> DensityMatrix:
        return DensityMatrix(sum(weight * bloch_to_density(state).matrix for weight, state in self.terms))

    def to_dict(self) -> Dict:
        return {"terms": [{"weight": weight, "state": state.to_list()} for weight, state in self.terms]}


def build_scenario(r0: BlochVector, r1: BlochVector) -> Scenario:
    """Construct the unique equal-average scenario for the pair (r0, r1)"""
    for vector in (r0, r1):
        bloch_to_density(vector)  # raises BallViolation outside the ball

    difference = r1 - r0
    separation = difference.norm
    if separation < TOLERANCES.degenerate:
        raise DegenerateScenario(
            f"States are {separation:.3e} apart; no flag direction exists for coincident states"
        )

    p = 2.0 / (separation + 2.0)
    # p / (2(1-p)) equals 1 / ||r1 - r0||
    delta_hat = difference.scale(1.0 / separation)
    r_B = r0.scale(p) + delta_hat.scale(separation / (separation + 2.0))

    scenario = Scenario(r0=r0, r1=r1, p=p, delta_hat=delta_hat, r_B=r_B)
    logger.debug(f"Scenario built: p={p:.12f}, delta_hat={delta_hat.to_list()}, r_B={r_B.to_list()}")
    return scenario


def verify_ensemble_equality(s: Scenario) -> float:
    """Trace-norm residual between the two ensemble averages"""
    return trace_norm_distance(s.ensemble(0), s.ensemble(1))


def pure_decomposition(rho: DensityMatrix) -> PureDecomposition:
    """
    Spectral decomposition into pure states, heaviest first. Terms with weight
    below the algebra tolerance are dropped; equal weights are ordered by
    descending Bloch coordinates.
    """
    rho.validate()
    spectrum = eig2(rho)
    terms = []
    for index, weight in enumerate(spectrum.values):
        if weight < TOLERANCES.algebra:
            continue
        terms.append((float(weight), pure_state_bloch(spectrum.vectors[:, index])))
    if not terms:
        raise InvalidState("Density matrix has no positive eigenvalue")

    terms.sort(key=lambda term: (-term[0], [-c for c in term[1].to_list()]))
    return PureDecomposition(terms=terms)


def main():
    """Example usage"""
    logging.basicConfig(level=logging.INFO)

    scenario = build_scenario(BlochVector(0.6, 0, 0), BlochVector(0, 0.6, 0))
    print(f"p = {scenario.p:.6f}")
    print(f"delta_hat = {scenario.delta_hat.to_list()}")
    print(f"r_B = {scenario.r_B.to_list()}")
    print(f"residual = {verify_ensemble_equality(scenario):.3e}")
    print(f"decomposition of rho_B = {pure_decomposition(scenario.average).to_dict()}")


if __name__ == "__main__":
    main()
