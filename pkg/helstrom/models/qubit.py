"""
Qubit State Representation

Closed-form single-qubit algebra used by every other module:
- Bloch vector <-> density matrix conversion, rho(v) = (I + v.sigma) / 2
- Hermitian 2x2 eigendecomposition without iterative solvers
- trace-norm distance between states
"""

from typing import Callable, Iterable, List, Sequence, Tuple, Union
from dataclasses import dataclass
import logging
import math

import numpy as np

from ..config import TOLERANCES
from .errors import BallViolation, InvalidState

logger = logging.getLogger(__name__)

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

Operator = Union["DensityMatrix", np.ndarray]


@dataclass(frozen=True)
class BlochVector:
    """Point of the Bloch ball; unit norm means a pure state"""
    x: float
    y: float
    z: float

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "BlochVector":
        if len(values) != 3:
            raise BallViolation(f"Bloch vector needs 3 components, got {len(values)}")
        return cls(float(values[0]), float(values[1]), float(values[2]))

    @classmethod
    def parse(cls, text: str) -> "BlochVector":
        """Parse the `x,y,z` flag format"""
        try:
            values = [float(part) for part in text.split(",")]
        except ValueError:
            raise BallViolation(f"Cannot parse Bloch vector from {text!r}")
        return cls.from_sequence(values)

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @property
    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def is_pure(self, tol: float = TOLERANCES.algebra) -> bool:
        return abs(self.norm - 1.0) <= tol

    def in_ball(self, tol: float = TOLERANCES.algebra) -> bool:
        return self.norm <= 1.0 + tol

    def __add__(self, other: "BlochVector") -> "BlochVector":
        return BlochVector(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "BlochVector") -> "BlochVector":
        return BlochVector(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "BlochVector":
        return BlochVector(-self.x, -self.y, -self.z)

    def scale(self, factor: float) -> "BlochVector":
        return BlochVector(factor * self.x, factor * self.y, factor * self.z)

    def distance(self, other: "BlochVector") -> float:
        return (self - other).norm

    def to_list(self) -> List[float]:
        return [self.x, self.y, self.z]


class DensityMatrix:
    """
    2x2 complex operator describing a qubit state.

    Construction does not validate: unnormalized intermediates show up inside
    compositions, so callers invoke `validate()` where it matters.
    """

    def __init__(self, matrix: Union[np.ndarray, Sequence[Sequence[complex]]]):
        data = np.array(matrix, dtype=complex)
        if data.shape != (2, 2):
            raise InvalidState(f"Expected a 2x2 matrix, got shape {data.shape}")
        data.setflags(write=False)
        self._matrix = data

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def entry(self, row: int, col: int) -> complex:
        return complex(self._matrix[row, col])

    @property
    def trace(self) -> float:
        return float(np.real(self._matrix[0, 0] + self._matrix[1, 1]))

    def eigenvalues(self) -> Tuple[float, float]:
        return eig2(self._matrix).values

    def transpose(self) -> "DensityMatrix":
        return DensityMatrix(self._matrix.T)

    def is_valid(self, tol: float = TOLERANCES.algebra) -> bool:
        try:
            self.validate(tol)
        except InvalidState:
            return False
        return True

    def validate(self, tol: float = TOLERANCES.algebra) -> "DensityMatrix":
        """Check Hermiticity, unit trace and positivity; returns self for chaining"""
        m = self._matrix
        if abs(m[1, 0] - np.conj(m[0, 1])) > tol:
            raise InvalidState(f"Off-diagonal entries are not conjugate: {m[0, 1]} vs {m[1, 0]}")
        if abs(m[0, 0].imag) > tol or abs(m[1, 1].imag) > tol:
            raise InvalidState("Diagonal entries must be real")
        if abs(self.trace - 1.0) > tol:
            raise InvalidState(f"Trace must be 1, got {self.trace:.15g}")
        smallest = self.eigenvalues()[1]
        if smallest < -tol:
            raise InvalidState(f"Matrix is not positive semidefinite (eigenvalue {smallest:.3e})")
        return self

    def allclose(self, other: Operator, tol: float = TOLERANCES.algebra) -> bool:
        return bool(np.max(np.abs(self._matrix - as_matrix(other))) <= tol)

    def to_json_matrix(self) -> List[List[List[float]]]:
        return matrix_to_json(self._matrix)

    def __repr__(self) -> str:
        return f"DensityMatrix({self._matrix.tolist()!r})"


@dataclass(frozen=True)
class EigenPair2:
    """Spectral data of a 2x2 Hermitian matrix: values descending, vectors as columns"""
    values: Tuple[float, float]
    vectors: np.ndarray

    def projector(self, index: int) -> np.ndarray:
        v = self.vectors[:, index]
        return np.outer(v, np.conj(v))

    def apply(self, func: Callable[[float], float]) -> np.ndarray:
        """Spectral calculus: sum_i func(lambda_i) |e_i><e_i|"""
        return sum(func(value) * self.projector(i) for i, value in enumerate(self.values))

    def reconstruct(self) -> np.ndarray:
        return self.apply(lambda value: value)


def as_matrix(op: Operator) -> np.ndarray:
    if isinstance(op, DensityMatrix):
        return op.matrix
    return np.asarray(op, dtype=complex)


def matrix_to_json(matrix: np.ndarray) -> List[List[List[float]]]:
    """Row-major nested lists with each entry as [re, im]"""
    return [[[float(np.real(value)), float(np.imag(value))] for value in row] for row in matrix]


def matrix_from_json(rows: Iterable[Iterable[Sequence[float]]]) -> np.ndarray:
    return np.array([[complex(entry[0], entry[1]) for entry in row] for row in rows], dtype=complex)


def operator_from_bloch(a: float, b: Sequence[float]) -> np.ndarray:
    """a*I + b.sigma"""
    bx, by, bz = (float(c) for c in b)
    return a * IDENTITY + bx * SIGMA_X + by * SIGMA_Y + bz * SIGMA_Z


def operator_to_bloch(op: Operator) -> Tuple[float, np.ndarray]:
    """Inverse of operator_from_bloch for Hermitian input: (a, b)"""
    m = as_matrix(op)
    a = float(np.real(m[0, 0] + m[1, 1])) / 2
    b = np.array([float(np.real(np.trace(m @ pauli))) / 2 for pauli in PAULIS])
    return a, b


def bloch_to_density(v: BlochVector) -> DensityMatrix:
    """rho(v) = (I + v.sigma) / 2"""
    if not v.in_ball():
        raise BallViolation(f"Bloch vector {v.to_list()} has norm {v.norm:.15g} > 1")
    return DensityMatrix(
        [
            [(1 + v.z) / 2, complex(v.x, -v.y) / 2],
            [complex(v.x, v.y) / 2, (1 - v.z) / 2],
        ]
    )


def density_to_bloch(rho: DensityMatrix) -> BlochVector:
    rho.validate()
    m = rho.matrix
    off = (m[1, 0] + np.conj(m[0, 1])) / 2
    return BlochVector(
        2 * float(off.real),
        2 * float(off.imag),
        float(np.real(m[0, 0] - m[1, 1])),
    )


def eig2(h: Operator) -> EigenPair2:
    """
    Closed-form eigendecomposition of a Hermitian 2x2 matrix.

    Eigenvalues are tr/2 +- sqrt((a-d)^2/4 + |b|^2). The top eigenvector is built
    from whichever row avoids cancellation; the second is its orthogonal
    complement. A multiple of the identity returns the computational basis.
    """
    m = as_matrix(h)
    a = float(np.real(m[0, 0]))
    d = float(np.real(m[1, 1]))
    b = (m[0, 1] + np.conj(m[1, 0])) / 2

    mean = (a + d) / 2
    half_gap = (a - d) / 2
    spread = math.hypot(half_gap, abs(b))

    if spread == 0.0:
        return EigenPair2(values=(mean, mean), vectors=np.eye(2, dtype=complex))

    if half_gap >= 0:
        top = np.array([spread + half_gap, np.conj(b)], dtype=complex)
    else:
        top = np.array([b, spread - half_gap], dtype=complex)
    top /= np.linalg.norm(top)
    bottom = np.array([-np.conj(top[1]), np.conj(top[0])], dtype=complex)

    return EigenPair2(
        values=(mean + spread, mean - spread),
        vectors=np.column_stack([top, bottom]),
    )


def sqrtm_psd(op: Operator) -> np.ndarray:
    """Square root of a PSD 2x2 matrix; tiny negative eigenvalues clip to zero"""
    return eig2(op).apply(lambda value: math.sqrt(max(value, 0.0)))


def trace_norm(op: Operator) -> float:
    values = eig2(op).values
    return abs(values[0]) + abs(values[1])


def trace_norm_distance(rho: Operator, sigma: Operator) -> float:
    """||rho - sigma||_1, the sum of absolute eigenvalues of the difference"""
    return trace_norm(as_matrix(rho) - as_matrix(sigma))


def pure_state_bloch(vector: np.ndarray) -> BlochVector:
    """Bloch direction of the (normalized) ket `vector`"""
    ket = np.asarray(vector, dtype=complex)
    ket = ket / np.linalg.norm(ket)
    projector = np.outer(ket, np.conj(ket))
    return BlochVector(
        2 * float(np.real(projector[1, 0])),
        2 * float(np.imag(projector[1, 0])),
        float(np.real(projector[0, 0] - projector[1, 1])),
    )


def main():
    """Example usage"""
    logging.basicConfig(level=logging.INFO)

    plus_x = bloch_to_density(BlochVector(1, 0, 0))
    up = bloch_to_density(BlochVector(0, 0, 1))
    print(f"rho(+x) = {plus_x.matrix.tolist()}")
    print(f"||rho(+x) - rho(+z)||_1 = {trace_norm_distance(plus_x, up):.6f}")
    print(f"eig(rho(0.6 x)) = {eig2(bloch_to_density(BlochVector(0.6, 0, 0))).values}")


if __name__ == "__main__":
    main()
