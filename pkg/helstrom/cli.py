"""
Command-line entry point.

    python -m helstrom bound --r0 0,0,1 --r1 0,0,-1
    python -m helstrom scenario --r0 0.8,0,0 --r1 -0.8,0,0 --json
    python -m helstrom steer --scenario s.json
    python -m helstrom scan --r0 1,0,0 --r1 0,0,1 --grid 64
    python -m helstrom blackbox --scenario s.json --responses perfect.json
    python -m helstrom simulate --r0 0.6,0,0 --r1 -0.6,0,0 --rounds 1000000 --threads 4

Results go to standard output, diagnostics to standard error. Exit status is
0 on success, 1 on domain or I/O errors and 2 on usage errors.
"""

from typing import List, Optional, Sequence
import argparse
import logging
import sys

from .config import TOLERANCES, load_simulation_defaults, log_level
from .models.discrimination import helstrom_bound, helstrom_detector
from .models.errors import ToolkitError
from .models.nosignal import blackbox_report, nosignal_error_bound
from .models.qubit import BlochVector, trace_norm_distance
from .models.scenario import Scenario, build_scenario, verify_ensemble_equality
from .models.steering import alice_measurements
from .services.documents import dump_document, load_blackbox, load_detector, load_scenario
from .services.scan import MIN_GRID, ScanReport, scan_detectors
from .services.simulation import SimConfig, empirical_gap, run_protocol, write_records

logger = logging.getLogger("helstrom.cli")

VECTOR_FLAGS = ("--r0", "--r1")


def _bloch(text: str) -> BlochVector:
    try:
        return BlochVector.parse(text)
    except ToolkitError as e:
        raise argparse.ArgumentTypeError(str(e))


def _grid(text: str) -> int:
    value = int(text)
    if value < MIN_GRID:
        raise argparse.ArgumentTypeError(f"grid must be at least {MIN_GRID}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _attach_vector_values(argv: Sequence[str]) -> List[str]:
    """Turn `--r1 -0.8,0,0` into `--r1=-0.8,0,0` so argparse does not read the value as a flag"""
    fixed: List[str] = []
    index = 0
    while index < len(argv):
        token = argv[index]
        if token in VECTOR_FLAGS and index + 1 < len(argv):
            fixed.append(f"{token}={argv[index + 1]}")
            index += 2
            continue
        fixed.append(token)
        index += 1
    return fixed


def _add_scenario_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--r0", type=_bloch, help="Bloch vector of rho0 as x,y,z")
    parser.add_argument("--r1", type=_bloch, help="Bloch vector of rho1 as x,y,z")
    parser.add_argument("--scenario", help="scenario JSON document (alternative to --r0/--r1)")


def build_parser() -> argparse.ArgumentParser:
    defaults = load_simulation_defaults()
    parser = argparse.ArgumentParser(
        prog="helstrom",
        description="Qubit minimum-error discrimination and the no-signalling bound",
    )
    parser.add_argument("--log-level", type=str.upper, default=log_level(),
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="logging level for diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    bound = sub.add_parser("bound", help="Helstrom bound of two states")
    bound.add_argument("--r0", type=_bloch, required=True)
    bound.add_argument("--r1", type=_bloch, required=True)
    bound.add_argument("--json", action="store_true")

    scenario = sub.add_parser("scenario", help="build the equal-average ensemble scenario")
    _add_scenario_source(scenario)
    scenario.add_argument("--json", action="store_true")
    scenario.add_argument("--geometry", action="store_true", help="include Bloch-plane coordinates")
    scenario.add_argument("--output", help="also write the scenario document to this file")

    steer = sub.add_parser("steer", help="purification and Alice's steering measurements")
    _add_scenario_source(steer)

    scan = sub.add_parser("scan", help="grid search over binary POVMs")
    _add_scenario_source(scan)
    scan.add_argument("--grid", type=_grid, default=64, help="points per grid dimension")

    blackbox = sub.add_parser("blackbox", help="bound chain for a black-box detector")
    _add_scenario_source(blackbox)
    blackbox.add_argument("--responses", required=True, help="black-box response JSON document")

    simulate = sub.add_parser("simulate", help="Monte-Carlo run of the steering protocol")
    _add_scenario_source(simulate)
    simulate.add_argument("--detector", help="detector JSON document (default: Helstrom measurement)")
    simulate.add_argument("--rounds", type=_positive, default=defaults.rounds)
    simulate.add_argument("--seed", type=_seed, default=defaults.seed)
    simulate.add_argument("--threads", type=_positive, default=defaults.threads)
    simulate.add_argument("--csv", help="write per-round records to this CSV file")
    simulate.add_argument("--json", action="store_true")

    return parser


def _resolve_scenario(parser: argparse.ArgumentParser, args: argparse.Namespace) -> Scenario:
    if args.scenario:
        if args.r0 is not None or args.r1 is not None:
            parser.error("use either --scenario or --r0/--r1, not both")
        return load_scenario(args.scenario)
    if args.r0 is None or args.r1 is None:
        parser.error("a scenario needs --scenario FILE or both --r0 and --r1")
    return build_scenario(args.r0, args.r1)


def _emit(text: str) -> None:
    sys.stdout.write(text + "\n")


def _format_number(value: float) -> str:
    return f"{value:.12g}"


def run_bound(args: argparse.Namespace) -> int:
    value = helstrom_bound(args.r0, args.r1)
    if args.json:
        document = {"r0": args.r0.to_list(), "r1": args.r1.to_list(), "helstrom_bound": value}
        if args.r0.distance(args.r1) >= TOLERANCES.degenerate:
            document["nosignal_bound"] = nosignal_error_bound(build_scenario(args.r0, args.r1))
        _emit(dump_document(document))
    else:
        _emit(_format_number(value))
    return 0


def run_scenario(args: argparse.Namespace, scenario: Scenario) -> int:
    document = scenario.to_dict()
    if args.geometry:
        document["plane_coordinates"] = scenario.plane_coordinates()
    text = dump_document(document, args.output)
    if args.json:
        _emit(text)
    else:
        _emit(f"p          = {_format_number(scenario.p)}")
        _emit(f"delta_hat  = {', '.join(_format_number(c) for c in scenario.delta_hat.to_list())}")
        _emit(f"r_B        = {', '.join(_format_number(c) for c in scenario.r_B.to_list())}")
        _emit(f"residual   = {verify_ensemble_equality(scenario):.3e}")
    return 0


def run_steer(scenario: Scenario) -> int:
    psi, m0, m1 = alice_measurements(scenario)
    checks = {}
    for label, measurement in (("M0", m0), ("M1", m1)):
        errors = measurement.steering_errors(psi)
        checks[label] = {
            "completeness_residual": measurement.completeness_residual(),
            "min_eigenvalue": measurement.min_eigenvalue(),
            "max_probability_error": max(e[0] for e in errors),
            "max_state_error": max(e[1] for e in errors),
            "marginal_error": trace_norm_distance(measurement.unconditioned_state(psi), scenario.average),
        }
    _emit(dump_document({
        "scenario": scenario.to_dict(),
        "purification": psi.to_dict(),
        "M0": m0.to_dict(),
        "M1": m1.to_dict(),
        "checks": checks,
    }))
    return 0


def scan(scenario: Scenario, grid: int) -> ScanReport:
    return scan_detectors(scenario, grid)


def run_blackbox(args: argparse.Namespace, scenario: Scenario) -> int:
    report = blackbox_report(load_blackbox(args.responses), scenario)
    _emit(dump_document(report.to_dict()))
    return 0


def run_simulate(args: argparse.Namespace, scenario: Scenario) -> int:
    if args.detector:
        detector = load_detector(args.detector, scenario.r0, scenario.r1)
    else:
        detector = helstrom_detector(scenario.r0, scenario.r1)
    report = run_protocol(SimConfig(
        scenario=scenario,
        detector=detector,
        rounds=args.rounds,
        seed=args.seed,
        threads=args.threads,
    ))
    if args.csv:
        with open(args.csv, "w", newline="") as sink:
            write_records(report, sink)
        logger.info(f"💾 Wrote {report.rounds} records to {args.csv}")
    if args.json:
        _emit(dump_document(report.to_dict()))
    else:
        _emit(f"rounds               = {report.rounds}")
        _emit(f"e_hat                = {_format_number(report.e_hat)}")
        _emit(f"discrimination_error = {_format_number(report.discrimination_error)}")
        _emit(f"empirical_gap        = {_format_number(empirical_gap(report))}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    raw = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_attach_vector_values(raw))
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(stream=sys.stderr, level=str(args.log_level).upper(),
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        if args.command == "bound":
            return run_bound(args)
        scenario = _resolve_scenario(parser, args)
        if args.command == "scenario":
            return run_scenario(args, scenario)
        if args.command == "steer":
            return run_steer(scenario)
        if args.command == "scan":
            _emit(dump_document(scan(scenario, args.grid).to_dict()))
            return 0
        if args.command == "blackbox":
            return run_blackbox(args, scenario)
        return run_simulate(args, scenario)
    except SystemExit as e:
        return int(e.code or 0)
    except ToolkitError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return 1
    except OSError as e:
        logger.error(f"❌ I/O error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
