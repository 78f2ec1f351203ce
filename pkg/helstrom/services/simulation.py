"""
Monte-Carlo Protocol Simulation

Each round Alice picks j uniformly, measures her half of the purification with
M_j, Bob's qubit collapses to one component of ensemble j, and Bob's detector
fires on it. Rounds are independent, so they are evaluated in chunks on a
thread pool and the per-chunk tallies are merged at the end.

Randomness is counter based: round r consumes uniforms 3r (Alice's choice),
3r+1 (Alice's outcome) and 3r+2 (Bob's outcome) of the Philox stream keyed by
the seed. Chunks are whole multiples of 4 rounds, i.e. whole Philox blocks,
so the output does not depend on the thread count.
"""

from typing import Dict, IO, Iterator, List, Optional, Tuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import csv
import logging
import math
import time

import numpy as np

from ..config import SimulationDefaults, load_simulation_defaults
from ..models.discrimination import BinaryPovm, response
from ..models.scenario import Scenario
from ..models.steering import alice_measurements

logger = logging.getLogger(__name__)

CSV_HEADER = ["round", "alice_choice", "alice_outcome", "bob_outcome", "correct"]
_UINT64_PER_BLOCK = 4
_DRAWS_PER_ROUND = 3


@dataclass(frozen=True, eq=False)
class SimConfig:
    """Inputs of one protocol run"""
    scenario: Scenario
    detector: BinaryPovm
    rounds: int
    seed: int = 42
    threads: int = 1

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {self.rounds}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class SimRecord:
    """One round of the protocol"""
    round: int
    alice_choice: int
    alice_outcome: int  # 0: Bob holds rho_j, 1: Bob holds the flag state
    bob_outcome: int

    @property
    def correct(self) -> bool:
        return self.bob_outcome == self.alice_choice

    def to_row(self) -> List[int]:
        return [self.round, self.alice_choice, self.alice_outcome, self.bob_outcome, int(self.correct)]


@dataclass
class _Tally:
    """counts[j, k, i]: Alice choice j, Alice outcome k, Bob outcome i"""
    counts: np.ndarray = field(default_factory=lambda: np.zeros((2, 2, 2), dtype=np.int64))

    @classmethod
    def from_arrays(cls, choices: np.ndarray, outcomes: np.ndarray, bobs: np.ndarray) -> "_Tally":
        index = 4 * choices.astype(np.int64) + 2 * outcomes.astype(np.int64) + bobs.astype(np.int64)
        return cls(counts=np.bincount(index, minlength=8).reshape(2, 2, 2))

    def merge(self, other: "_Tally") -> "_Tally":
        return _Tally(counts=self.counts + other.counts)


def _ratio(numerator: int, denominator: int) -> float:
    return numerator / denominator if denominator else float("nan")


def _binomial_se(frequency: float, trials: int) -> float:
    if not trials or math.isnan(frequency):
        return float("nan")
    return math.sqrt(frequency * (1.0 - frequency) / trials)


def _json_float(value: float) -> Optional[float]:
    return None if math.isnan(value) else value


@dataclass(frozen=True, eq=False)
class SimReport:
    """
    Empirical record of a protocol run.

    `d_hat[i][j]` estimates D_i^j. Columns for a choice j that never occurred
    are NaN. `elapsed_seconds` is informational and ignored by `==`.
    """
    rounds: int
    choices: np.ndarray
    outcomes: np.ndarray
    bobs: np.ndarray
    counts: np.ndarray
    elapsed_seconds: float = 0.0

    @classmethod
    def from_arrays(cls, choices: np.ndarray, outcomes: np.ndarray, bobs: np.ndarray,
                    elapsed_seconds: float = 0.0) -> "SimReport":
        choices = np.asarray(choices, dtype=np.int8)
        outcomes = np.asarray(outcomes, dtype=np.int8)
        bobs = np.asarray(bobs, dtype=np.int8)
        return cls(
            rounds=int(choices.size),
            choices=choices,
            outcomes=outcomes,
            bobs=bobs,
            counts=_Tally.from_arrays(choices, outcomes, bobs).counts,
            elapsed_seconds=elapsed_seconds,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimReport):
            return NotImplemented
        return (
            self.rounds == other.rounds
            and np.array_equal(self.choices, other.choices)
            and np.array_equal(self.outcomes, other.outcomes)
            and np.array_equal(self.bobs, other.bobs)
            and np.array_equal(self.counts, other.counts)
        )

    @property
    def choice_counts(self) -> np.ndarray:
        return self.counts.sum(axis=(1, 2))

    @property
    def e_hat(self) -> float:
        """Fraction of rounds where Bob's answer differs from Alice's choice"""
        wrong = int(self.counts[0, :, 1].sum() + self.counts[1, :, 0].sum())
        return wrong / self.rounds

    @property
    def d_hat(self) -> List[List[float]]:
        table = [[0.0, 0.0], [0.0, 0.0]]
        for j in (0, 1):
            column = self.counts[j].sum(axis=0)
            total = int(column.sum())
            table[0][j] = _ratio(int(column[0]), total)
            table[1][j] = 1.0 - table[0][j]
        return table

    @property
    def component_error_rates(self) -> List[List[float]]:
        """[j][k]: error rate among rounds with Alice choice j and outcome k"""
        rates = []
        for j in (0, 1):
            row = []
            for k in (0, 1):
                total = int(self.counts[j, k].sum())
                row.append(_ratio(int(self.counts[j, k, 1 - j]), total))
            rates.append(row)
        return rates

    @property
    def discrimination_error(self) -> float:
        """Error over rounds in which Bob holds rho_j itself"""
        total = int(self.counts[:, 0, :].sum())
        wrong = int(self.counts[0, 0, 1] + self.counts[1, 0, 0])
        return _ratio(wrong, total)

    @property
    def alice_outcome_frequencies(self) -> List[float]:
        totals = self.counts.sum(axis=(0, 2))
        return [int(totals[0]) / self.rounds, int(totals[1]) / self.rounds]

    @property
    def standard_errors(self) -> Dict:
        choice_counts = self.choice_counts
        d_hat = self.d_hat
        return {
            "e_hat": _binomial_se(self.e_hat, self.rounds),
            "discrimination_error": _binomial_se(
                self.discrimination_error, int(self.counts[:, 0, :].sum())
            ),
            "d_hat": [
                [_binomial_se(d_hat[i][j], int(choice_counts[j])) for j in (0, 1)] for i in (0, 1)
            ],
            "alice_outcome_frequencies": [
                _binomial_se(f, self.rounds) for f in self.alice_outcome_frequencies
            ],
        }

    def records(self) -> Iterator[SimRecord]:
        for index in range(self.rounds):
            yield SimRecord(
                round=index,
                alice_choice=int(self.choices[index]),
                alice_outcome=int(self.outcomes[index]),
                bob_outcome=int(self.bobs[index]),
            )

    def to_dict(self) -> Dict:
        se = self.standard_errors
        return {
            "rounds": self.rounds,
            "e_hat": self.e_hat,
            "discrimination_error": _json_float(self.discrimination_error),
            "d_hat": [[_json_float(v) for v in row] for row in self.d_hat],
            "component_error_rates": [[_json_float(v) for v in row] for row in self.component_error_rates],
            "alice_outcome_frequencies": self.alice_outcome_frequencies,
            "empirical_gap": _json_float(empirical_gap(self)),
            "standard_errors": {
                "e_hat": _json_float(se["e_hat"]),
                "discrimination_error": _json_float(se["discrimination_error"]),
                "d_hat": [[_json_float(v) for v in row] for row in se["d_hat"]],
                "alice_outcome_frequencies": [_json_float(v) for v in se["alice_outcome_frequencies"]],
            },
            "elapsed_seconds": self.elapsed_seconds,
        }


@dataclass(frozen=True)
class _ProtocolTables:
    """Per-round probabilities derived once from the steering construction"""
    alice_p0: np.ndarray  # [j] probability that M_j yields the rho_j outcome
    bob_p0: np.ndarray    # [j, k] P0 of Bob's detector on component k of ensemble j


def _protocol_tables(config: SimConfig) -> _ProtocolTables:
    psi, m0, m1 = alice_measurements(config.scenario)
    alice_p0 = np.zeros(2)
    bob_p0 = np.zeros((2, 2))
    for j, measurement in enumerate((m0, m1)):
        statistics = measurement.outcome_statistics(psi)
        alice_p0[j] = statistics[0][0]
        for k, (_, state) in enumerate(statistics):
            bob_p0[j, k] = response(config.detector, state).p0
    return _ProtocolTables(alice_p0=alice_p0, bob_p0=bob_p0)


def _run_chunk(seed: int, start: int, count: int,
               tables: _ProtocolTables) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    block = _DRAWS_PER_ROUND * start // _UINT64_PER_BLOCK
    generator = np.random.Generator(np.random.Philox(key=seed, counter=block))
    draws = generator.random(_DRAWS_PER_ROUND * count).reshape(count, _DRAWS_PER_ROUND)

    choices = (draws[:, 0] >= 0.5).astype(np.int8)
    outcomes = (draws[:, 1] >= tables.alice_p0[choices]).astype(np.int8)
    bobs = (draws[:, 2] >= tables.bob_p0[choices, outcomes]).astype(np.int8)
    return choices, outcomes, bobs


def run_protocol(config: SimConfig, defaults: Optional[SimulationDefaults] = None) -> SimReport:
    """Simulate `config.rounds` rounds of the steering protocol"""
    defaults = defaults or load_simulation_defaults()
    started = time.perf_counter()
    tables = _protocol_tables(config)

    chunk = defaults.chunk_rounds
    starts = list(range(0, config.rounds, chunk))
    logger.info(
        f"🎲 Simulating {config.rounds} rounds in {len(starts)} chunks on {config.threads} thread(s)"
    )

    def work(start: int):
        return _run_chunk(config.seed, start, min(chunk, config.rounds - start), tables)

    if config.threads == 1:
        parts = [work(start) for start in starts]
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            parts = list(pool.map(work, starts))

    tally = _Tally()
    for part in parts:
        tally = tally.merge(_Tally.from_arrays(*part))

    report = SimReport(
        rounds=config.rounds,
        choices=np.concatenate([part[0] for part in parts]),
        outcomes=np.concatenate([part[1] for part in parts]),
        bobs=np.concatenate([part[2] for part in parts]),
        counts=tally.counts,
        elapsed_seconds=time.perf_counter() - started,
    )
    logger.info(f"✅ Simulation done: e_hat={report.e_hat:.6f} in {report.elapsed_seconds:.2f}s")
    return report


def empirical_gap(r: SimReport) -> float:
    """D0^0 + D1^1 - 1 estimated from the counts"""
    d_hat = r.d_hat
    return d_hat[0][0] + d_hat[1][1] - 1.0


def write_records(r: SimReport, sink: IO[str]) -> None:
    """CSV with header `round,alice_choice,alice_outcome,bob_outcome,correct`"""
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for record in r.records():
        writer.writerow(record.to_row())
