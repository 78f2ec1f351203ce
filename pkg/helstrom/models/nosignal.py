"""
No-Signalling Bound Chain

D_i^j is the probability that Bob's detector answers i while Alice has
prepared ensemble j. Because both ensembles average to the same rho_B, a
physical detector always has D_0^0 + D_1^1 = 1. A black box that beats the
Helstrom bound forces D_0^0 + D_1^1 > 1, so Bob could read Alice's choice,
which is signalling.

Flag-state responses of a black box may be left unspecified; they are then
free parameters in [0, 1] and every derived quantity becomes an interval.
"""

from typing import Dict, Optional, Tuple, Union
from dataclasses import dataclass, field
import logging

from ..config import TOLERANCES
from .discrimination import BinaryPovm, error_rate, helstrom_bound, response
from .errors import InvalidDetector
from .qubit import bloch_to_density
from .scenario import Scenario

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi]; a point when lo == hi"""
    lo: float
    hi: float

    @classmethod
    def point(cls, value: float) -> "Interval":
        return cls(value, value)

    @classmethod
    def unit(cls) -> "Interval":
        return cls(0.0, 1.0)

    def __add__(self, other: Union["Interval", float]) -> "Interval":
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __sub__(self, other: float) -> "Interval":
        return Interval(self.lo - other, self.hi - other)

    def __rsub__(self, other: float) -> "Interval":
        return Interval(other - self.hi, other - self.lo)

    def scale(self, factor: float) -> "Interval":
        """Multiply by a non-negative factor"""
        return Interval(factor * self.lo, factor * self.hi)

    def contains(self, value: float, tol: float = TOLERANCES.algebra) -> bool:
        return self.lo - tol <= value <= self.hi + tol

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def to_list(self):
        return [self.lo, self.hi]


@dataclass(frozen=True)
class BlackBoxResponse:
    """
    Input/output table of a detector with no assumed physical model.
    Only P0 is stored; P1 = 1 - P0 for every input.
    """
    p0_rho0: float
    p0_rho1: float
    p0_delta_plus: Optional[float] = None  # None means unspecified
    p0_delta_minus: Optional[float] = None

    def __post_init__(self):
        for name in ("p0_rho0", "p0_rho1", "p0_delta_plus", "p0_delta_minus"):
            value = getattr(self, name)
            if value is None and name in ("p0_rho0", "p0_rho1"):
                raise InvalidDetector(f"{name} must be specified")
            if value is not None and not 0.0 <= value <= 1.0:
                raise InvalidDetector(f"{name}={value} is not a probability")

    @property
    def fully_specified(self) -> bool:
        return self.p0_delta_plus is not None and self.p0_delta_minus is not None

    @classmethod
    def from_povm(cls, d: BinaryPovm, s: Scenario) -> "BlackBoxResponse":
        """Tabulate a physical detector on the four states of the scenario"""
        return cls(
            p0_rho0=response(d, s.rho0).p0,
            p0_rho1=response(d, s.rho1).p0,
            p0_delta_plus=response(d, bloch_to_density(s.flag(0))).p0,
            p0_delta_minus=response(d, bloch_to_density(s.flag(1))).p0,
        )

    @classmethod
    def perfect(cls) -> "BlackBoxResponse":
        """Hypothetical detector that never errs on rho0 / rho1"""
        return cls(p0_rho0=1.0, p0_rho1=0.0)

    @classmethod
    def helstrom_rate(cls, s: Scenario) -> "BlackBoxResponse":
        """Black box succeeding on each target exactly at the Helstrom rate"""
        success = 1.0 - helstrom_bound(s.r0, s.r1)
        return cls(p0_rho0=success, p0_rho1=1.0 - success)

    def relabelled(self) -> "BlackBoxResponse":
        """Swap outcome labels 0 <-> 1"""

        def flip(value: Optional[float]) -> Optional[float]:
            return None if value is None else 1.0 - value

        return BlackBoxResponse(
            p0_rho0=1.0 - self.p0_rho0,
            p0_rho1=1.0 - self.p0_rho1,
            p0_delta_plus=flip(self.p0_delta_plus),
            p0_delta_minus=flip(self.p0_delta_minus),
        )

    def to_dict(self) -> Dict:
        return {
            "p0_rho0": self.p0_rho0,
            "p0_rho1": self.p0_rho1,
            "p0_delta_plus": self.p0_delta_plus,
            "p0_delta_minus": self.p0_delta_minus,
        }

    @classmethod
    def from_dict(cls, document: Dict) -> "BlackBoxResponse":
        def optional(key: str) -> Optional[float]:
            value = document.get(key)
            return None if value is None else float(value)

        try:
            return cls(
                p0_rho0=float(document["p0_rho0"]),
                p0_rho1=float(document["p0_rho1"]),
                p0_delta_plus=optional("p0_delta_plus"),
                p0_delta_minus=optional("p0_delta_minus"),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidDetector(f"Malformed black-box document: {e}")


@dataclass(frozen=True)
class SignallingReport:
    """Evaluation of the bound chain for one detector on one scenario"""
    d00: Interval
    d10: Interval
    d01: Interval
    d11: Interval
    gap: Interval
    error_rate: float
    nosignal_floor: float
    helstrom_floor: float
    chain_flags: Dict[str, bool] = field(default_factory=dict)
    signalling: bool = False
    decodable: bool = False  # D00 > D01 and D10 < D11 certain from the intervals
    relabelled: bool = False

    def to_dict(self) -> Dict:
        return {
            "d00": self.d00.to_list(),
            "d10": self.d10.to_list(),
            "d01": self.d01.to_list(),
            "d11": self.d11.to_list(),
            "gap": self.gap.to_list(),
            "gap_lower_bound": self.gap.lo,
            "error_rate": self.error_rate,
            "nosignal_floor": self.nosignal_floor,
            "helstrom_floor": self.helstrom_floor,
            "chain_flags": dict(self.chain_flags),
            "signalling": self.signalling,
            "decodable": self.decodable,
            "relabelled": self.relabelled,
        }


def ensemble_response(d: BinaryPovm, s: Scenario, j: int) -> Tuple[float, float]:
    """(D_0^j, D_1^j) for a physical detector"""
    d0 = sum(weight * response(d, state).p0 for weight, state in s.components(j))
    d0 = min(max(d0, 0.0), 1.0)
    return d0, 1.0 - d0


def signalling_gap(d: BinaryPovm, s: Scenario) -> float:
    """D_0^0 + D_1^1 - 1"""
    d00, _ = ensemble_response(d, s, 0)
    _, d11 = ensemble_response(d, s, 1)
    return d00 + d11 - 1.0


def nosignal_error_bound(s: Scenario) -> float:
    """Error floor 1 - 1/(2p); equals 1/2 - ||r0 - r1||/4 for a valid scenario"""
    return 1.0 - 1.0 / (2.0 * s.p)


def _flag_response(value: Optional[float]) -> Interval:
    return Interval.unit() if value is None else Interval.point(value)


def blackbox_report(b: BlackBoxResponse, s: Scenario) -> SignallingReport:
    """Run the bound chain on a black-box detector"""
    tol = TOLERANCES.algebra
    relabelled = b.p0_rho0 < b.p0_rho1
    if relabelled:
        logger.info("🔄 Relabelling black-box outcomes so that P0(rho0) >= P0(rho1)")
        b = b.relabelled()

    p = s.p
    p0_rho0, p1_rho1 = b.p0_rho0, 1.0 - b.p0_rho1

    d00 = p * p0_rho0 + _flag_response(b.p0_delta_plus).scale(1.0 - p)
    d01 = p * b.p0_rho1 + _flag_response(b.p0_delta_minus).scale(1.0 - p)
    d10 = 1.0 - d00
    d11 = 1.0 - d01
    gap = d00 + d11 - 1.0

    e = 0.5 * ((1.0 - p0_rho0) + b.p0_rho1)
    nosignal_floor = nosignal_error_bound(s)
    helstrom_floor = 0.5 - s.separation / 4.0
    success_sum = p * (p0_rho0 + p1_rho1)

    signalling = gap.lo > TOLERANCES.signalling
    chain_flags = {
        "ensemble0_lower_bound": d00.lo >= p * p0_rho0 - tol,
        "ensemble1_lower_bound": d11.lo >= p * p1_rho1 - tol,
        "no_signalling": gap.lo <= TOLERANCES.signalling,
        "success_sum_bound": success_sum <= 1.0 + tol,
        "nosignal_error_floor": e >= nosignal_floor - tol,
        "helstrom_error_floor": e >= helstrom_floor - tol,
    }
    decodable = d00.lo > d01.hi + TOLERANCES.signalling and d10.hi < d11.lo - TOLERANCES.signalling

    if signalling:
        logger.warning(
            f"⚠️ Detector signals: gap lower bound {gap.lo:.6f} > 0 (e={e:.6f} < floor {nosignal_floor:.6f})"
        )

    return SignallingReport(
        d00=d00,
        d10=d10,
        d01=d01,
        d11=d11,
        gap=gap,
        error_rate=e,
        nosignal_floor=nosignal_floor,
        helstrom_floor=helstrom_floor,
        chain_flags=chain_flags,
        signalling=signalling,
        decodable=decodable,
        relabelled=relabelled,
    )


def povm_report(d: BinaryPovm, s: Scenario) -> SignallingReport:
    """Bound chain for a physical detector (all intervals collapse to points)"""
    report = blackbox_report(BlackBoxResponse.from_povm(d, s), s)
    logger.debug(f"POVM report: e={error_rate(d, s.r0, s.r1):.6f}, gap={report.gap.lo:.3e}")
    return report


def main():
    """Example usage"""
    from .qubit import BlochVector
    from .scenario import build_scenario

    logging.basicConfig(level=logging.INFO)

    scenario = build_scenario(BlochVector(0.6, 0, 0), BlochVector(-0.6, 0, 0))
    print(f"No-signalling floor: {nosignal_error_bound(scenario):.6f}")
    print(f"Perfect box: {blackbox_report(BlackBoxResponse.perfect(), scenario).to_dict()}")
    print(f"Helstrom-rate box: {blackbox_report(BlackBoxResponse.helstrom_rate(scenario), scenario).to_dict()}")


if __name__ == "__main__":
    main()
