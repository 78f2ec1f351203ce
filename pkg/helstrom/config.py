"""
Toolkit configuration.

Numeric tolerances shared by every model module, and simulation defaults that
can be overridden from the environment (HELSTROM_* variables).
"""

from dataclasses import dataclass
import logging
import os


@dataclass(frozen=True)
class Tolerances:
    """Thresholds used across the toolkit"""
    algebra: float = 1e-12          # algebraic identities, invariants of values
    psd_floor: float = 1e-12        # smallest eigenvalue still counted as >= 0
    degenerate: float = 1e-9        # ||r0 - r1|| below this has no flag direction
    average_mismatch: float = 1e-10  # steering components vs. Bob's marginal
    near_singular: float = 1e-10    # min eigenvalue of rho_B for steering
    zero_probability: float = 1e-14  # conditional state undefined below this
    document: float = 1e-9          # fully specified scenario documents
    signalling: float = 1e-9        # strictness margin of a positive gap


TOLERANCES = Tolerances()


@dataclass(frozen=True)
class SimulationDefaults:
    """Defaults for the Monte-Carlo protocol"""
    rounds: int = 100_000
    seed: int = 42
    threads: int = 1
    chunk_rounds: int = 65_536  # must stay a multiple of 4
    max_service_rounds: int = 1_000_000


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        logging.getLogger(__name__).warning(f"⚠️ Ignoring non-integer {name}={raw!r}")
        return default


def load_simulation_defaults() -> SimulationDefaults:
    """Read HELSTROM_THREADS / HELSTROM_CHUNK_ROUNDS over the built-in defaults"""
    base = SimulationDefaults()
    chunk = _env_int("HELSTROM_CHUNK_ROUNDS", base.chunk_rounds)
    if chunk < 4 or chunk % 4:
        logging.getLogger(__name__).warning(
            f"⚠️ HELSTROM_CHUNK_ROUNDS={chunk} is not a positive multiple of 4, using {base.chunk_rounds}"
        )
        chunk = base.chunk_rounds
    return SimulationDefaults(
        rounds=base.rounds,
        seed=base.seed,
        threads=max(1, _env_int("HELSTROM_THREADS", base.threads)),
        chunk_rounds=chunk,
        max_service_rounds=base.max_service_rounds,
    )


def log_level(default: str = "WARNING") -> str:
    return os.environ.get("HELSTROM_LOG_LEVEL", default).upper()
