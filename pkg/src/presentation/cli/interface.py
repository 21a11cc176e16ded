import argparse
import json
import logging
import sys
from typing import Sequence, TextIO

from dishka import make_container, Scope

from src.providers import AppProvider, AnalysisSettings
from src.exceptions import (
    BaseAppError, ParseError, NetworkValidationError, HypothesisViolationError,
    NotOneDimensionalError, CoreSearchCapError, InconsistencyError, WindowError,
    NotBirthDeathError, InsufficientSupportError, LatticeError, SimulationParameterError
)
from .manager import CommandManager
from .state import RunState, Report

EXIT_OK, EXIT_UNKNOWN, EXIT_INPUT, EXIT_INCONSISTENT = 0, 1, 2, 3

INPUT_ERRORS = (
    ParseError, NetworkValidationError, HypothesisViolationError, NotOneDimensionalError,
    CoreSearchCapError, WindowError, NotBirthDeathError, InsufficientSupportError, LatticeError,
    SimulationParameterError
)


def _state(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace(" ", "").strip("()").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated counts, got {text!r}")


def _binding(text: str) -> tuple[str, str]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    return name.strip(), value.strip()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="srn", description="Structural and dynamical analysis of stochastic reaction networks")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], default=None)
    commands = parser.add_subparsers(dest="command", required=True)

    def with_file(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("file")
        sub.add_argument(
            "--kappa", "--rate", dest="rates", action="append", type=_binding, default=[],
            metavar="NAME=VALUE", help="value of a symbolic rate constant"
        )
        return sub

    with_file("parse", "parse and echo the canonical form")

    classify = with_file("classify", "state-space classification")
    classify.add_argument("--budget", type=int)
    classify.add_argument("--window", dest="window_bound", type=int, help="coordinate bound of reachability search windows")
    classify.add_argument("--sample-window", type=int, help="sample window bound for the extinction check")

    core = with_file("core", "minimal core networks")
    core.add_argument("--budget", type=int)
    core.add_argument("--cap", type=int)

    analyze = with_file("analyze1d", "threshold dynamics of a one-dimensional network")
    analyze.add_argument("--c", type=_state, help="representative state of the compatibility class")
    analyze.add_argument("--endotactic", action="store_true", help="treat the network as endotactic")

    simulate = with_file("simulate", "stochastic simulation")
    simulate.add_argument("mode", choices=["traj", "stationary", "qsd", "tail"])
    simulate.add_argument("--x0", type=_state, required=True)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--events", type=int)
    simulate.add_argument("--time", type=float)
    simulate.add_argument("--norm", type=int, help="state norm that counts as a suspected explosion")
    simulate.add_argument("--count", type=int, default=1)
    simulate.add_argument("--burn-in", type=float, default=0.0)
    simulate.add_argument("--horizon", type=float, default=1000.0)
    simulate.add_argument("--particles", type=int, default=100)
    simulate.add_argument("--exact", action="store_true", help="tail from the exact birth-death product formula")
    simulate.add_argument("--csv", dest="csv_path")

    oracle = with_file("oracle", "brute-force class decomposition on a window")
    oracle.add_argument("--window", type=int, default=12)
    oracle.add_argument("--c", type=_state)

    commands.add_parser("schema", help="print the report JSON schema")
    return parser


def dispatch(manager: CommandManager, args: argparse.Namespace) -> Report:
    rates = dict(args.rates)
    match args.command:
        case "parse":
            return manager.parse(args.file, rates)
        case "classify":
            return manager.classify(args.file, rates, budget=args.budget, sample_window=args.sample_window)
        case "core":
            return manager.core(args.file, rates, budget=args.budget, cap=args.cap)
        case "analyze1d":
            return manager.analyze1d(args.file, rates, c=args.c, endotactic=args.endotactic)
        case "simulate":
            return manager.simulate(
                args.file, args.mode, args.x0, args.seed, rates,
                events=args.events, time=args.time, norm=args.norm, count=args.count,
                burn_in=args.burn_in, horizon=args.horizon, particles=args.particles,
                exact=args.exact, csv_path=args.csv_path
            )
        case "oracle":
            return manager.oracle(args.file, rates, window=args.window, c=args.c)
    raise ValueError(f"unknown command {args.command}")


def _failure(state: RunState, error: BaseAppError, code: int) -> Report:
    report = state.report(None, {})
    report.exit_code = code
    report.error = {"type": error.__class__.__name__, "message": str(error), "context": _jsonable(error.context)}
    return report


def _jsonable(value):
    return json.loads(json.dumps(value, default=str))


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    settings = AnalysisSettings.from_env(
        log_level=args.log_level,
        budget=getattr(args, "budget", None),
        window_bound=getattr(args, "window_bound", None),
        core_cap=getattr(args, "cap", None)
    )
    logging.basicConfig(
        level=getattr(logging, settings.log_level),
        format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
        stream=sys.stderr,
        force=True
    )
    logger = logging.getLogger("srn")

    if args.command == "schema":
        json.dump(CommandManager.schema(), stdout, indent=2)
        stdout.write("\n")
        return EXIT_OK

    container = make_container(AppProvider(scope=Scope.APP, logger=logger, settings=settings))
    state = RunState(command=list(argv if argv is not None else sys.argv[1:]))
    try:
        report = dispatch(CommandManager(container, settings, state), args)
    except InconsistencyError as e:
        report = _failure(state, e, EXIT_INCONSISTENT)
    except INPUT_ERRORS as e:
        report = _failure(state, e, EXIT_INPUT)
    except OSError as e:
        report = state.report(None, {})
        report.exit_code = EXIT_INPUT
        report.error = {"type": e.__class__.__name__, "message": str(e), "context": {}}
    except BaseAppError as e:
        # AnalysisError and the rest are internal failures
        report = _failure(state, e, EXIT_INCONSISTENT)
    finally:
        container.close()

    stdout.write(report.model_dump_json(indent=2))
    stdout.write("\n")
    return report.exit_code
