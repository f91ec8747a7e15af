"""Command line entry point for statecover."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import structlog
from pydantic import ValidationError

from . import __version__
from .config import VALID_LOG_FORMATS, VALID_LOG_LEVELS, StatecoverConfig
from .error_handler import ErrorHandler
from .exceptions import EXIT_OK, EXIT_SEMANTIC, EmptySuite, InvalidParameter, ModelFileError
from .export import export_dot, report_to_json, report_to_table, suite_from_json, suite_to_json
from .generator import enumerate_sequences, generate_ftc_suite, generate_ktc_suite
from .machine import check_suite, flatten, validate
from .metrics import coverage_report
from .minimizer import minimize_suite, subsumption_table
from .models import (
    GenerationMode,
    Grouping,
    OutputFormat,
    RunConfig,
    Statechart,
    SubsumptionRelation,
    SubsumptionStrategy,
    TestSuite,
)
from .parser import parse_statechart, serialize_statechart
from .tgraph import augment, build_transition_graph, k_fold_transform

logger = structlog.get_logger(__name__)

RULES = {
    "node": SubsumptionRelation.NODE,
    "transition": SubsumptionRelation.TRANSITION,
    "element": SubsumptionRelation.ELEMENT,
}
GROUPS = {"global": Grouping.GLOBAL, "by-start": Grouping.BY_INITIAL_STATE}


def setup_logging(config: StatecoverConfig) -> None:
    """Set up structured logging on stderr based on configuration."""
    logging.basicConfig(
        level=getattr(logging, config.log_level),
        stream=sys.stderr,
        format="%(message)s",
        force=True,
    )

    processors = [
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]

    if config.log_format == "json":
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one sub-command per pipeline stage."""
    parser = argparse.ArgumentParser(
        prog="statecover",
        description="Statechart-based test generation, minimization and coverage",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Environment Variables:
  STATECOVER_CAP               Maximum generated test cases (default: 100000)
  STATECOVER_GTSP_EXACT_LIMIT  Largest graph solved exactly (default: 12)
  STATECOVER_PATH_BOUND        Default path bound for coverage reports
  STATECOVER_LOG_LEVEL         DEBUG, INFO, WARNING, ERROR, CRITICAL (default: WARNING)
  STATECOVER_LOG_FORMAT        json, text (default: text)

Exit codes: 0 success, 1 I/O or parse error, 2 semantic error, 3 suite cap exceeded.

Examples:
  statecover validate atm.scd
  statecover generate atm.scd --mode enumerate --max-len 7 --out suite.json
  statecover minimize suite.json atm.scd --rule transition --group global
  statecover report atm.scd suite.json --format text
  statecover graph atm.scd --k 2 | dot -Tpng > tg.png
        """,
    )
    parser.add_argument("--config-file", type=Path, help="JSON configuration file (environment takes precedence)")
    parser.add_argument("--log-level", choices=VALID_LOG_LEVELS, help="Override log level")
    parser.add_argument("--log-format", choices=VALID_LOG_FORMATS, help="Override log format")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log progress at INFO level")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser("validate", help="Check a statechart for well-formedness")
    cmd.add_argument("model", type=Path)

    cmd = commands.add_parser("generate", help="Generate a test suite")
    cmd.add_argument("model", type=Path)
    cmd.add_argument("--mode", choices=[m.value for m in GenerationMode], default=GenerationMode.KTC.value)
    cmd.add_argument("--k", type=int, default=1, help="Sequence length covered by ktc")
    cmd.add_argument("--max-len", type=int, default=7, help="Longest enumerated sequence")
    cmd.add_argument("--pairs", action="store_true", help="ftc: one case per false transition pair")
    cmd.add_argument("--guard-probes", action="store_true", help="ftc: add guard-false probe cases")
    cmd.add_argument("--out", type=Path, help="Write the suite here instead of stdout")

    cmd = commands.add_parser("minimize", help="Drop test cases covered by others")
    cmd.add_argument("suite", type=Path)
    cmd.add_argument("model", type=Path)
    cmd.add_argument("--rule", choices=sorted(RULES), default="element")
    cmd.add_argument("--group", choices=sorted(GROUPS), default="global")
    cmd.add_argument("--out", type=Path)

    cmd = commands.add_parser("report", help="Coverage of a suite against a model")
    cmd.add_argument("model", type=Path)
    cmd.add_argument("suite", type=Path)
    cmd.add_argument("--path-bound", type=int)
    cmd.add_argument("--format", choices=[OutputFormat.JSON.value, OutputFormat.TEXT.value], default="json")
    cmd.add_argument("--out", type=Path)

    cmd = commands.add_parser("graph", help="Transition graph as DOT")
    cmd.add_argument("model", type=Path)
    cmd.add_argument("--k", type=int, default=1)
    cmd.add_argument("--out", type=Path)

    cmd = commands.add_parser("flatten", help="Print the flattened statechart")
    cmd.add_argument("model", type=Path)
    cmd.add_argument("--out", type=Path)

    return parser


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as e:
        raise ModelFileError(str(path), e.strerror or str(e)) from None


def _load_model(path: Path, strict: bool = True) -> Statechart:
    return parse_statechart(_read(path), strict=strict)


def _load_suite(path: Path) -> TestSuite:
    try:
        text = _read(path).decode("utf-8")
    except UnicodeDecodeError as e:
        raise ModelFileError(str(path), f"not UTF-8 ({e.reason})") from None
    return suite_from_json(text)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        out.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ModelFileError(str(out), e.strerror or str(e)) from None


def _run_config(args: argparse.Namespace, config: StatecoverConfig, **fields: Any) -> RunConfig:
    try:
        return RunConfig(command=args.command, suite_cap=config.suite_cap, **fields)
    except ValidationError as e:
        error = e.errors()[0]
        name = ".".join(str(x) for x in error["loc"])
        raise InvalidParameter(name, error.get("input"), error["msg"]) from None


def cmd_validate(args: argparse.Namespace, config: StatecoverConfig) -> int:
    sc = _load_model(args.model, strict=False)
    violations = validate(sc)
    if violations:
        for violation in violations:
            sys.stdout.write(f"{violation}: {violation.message}\n" if violation.message else f"{violation}\n")
        return EXIT_SEMANTIC
    sys.stdout.write(f"{sc.name}: valid\n")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace, config: StatecoverConfig) -> int:
    run = _run_config(
        args,
        config,
        input_path=args.model,
        mode=args.mode,
        k=args.k,
        max_len=args.max_len,
        pair_coverage=args.pairs,
        guard_probes=args.guard_probes,
        output_path=args.out,
    )
    sc = _load_model(run.input_path)
    if run.mode is GenerationMode.ENUMERATE:
        suite = enumerate_sequences(sc, run.max_len, cap=run.suite_cap)
    elif run.mode is GenerationMode.KTC:
        suite = generate_ktc_suite(sc, run.k, exact_limit=config.gtsp_exact_limit, cap=run.suite_cap)
    else:
        suite = generate_ftc_suite(sc, pair_coverage=run.pair_coverage, guard_probes=run.guard_probes, cap=run.suite_cap)
    _emit(suite_to_json(suite), run.output_path)
    return EXIT_OK


def cmd_minimize(args: argparse.Namespace, config: StatecoverConfig) -> int:
    strategy = SubsumptionStrategy(relation=RULES[args.rule], grouping=GROUPS[args.group])
    run = _run_config(args, config, input_path=args.suite, model_path=args.model, strategy=strategy, output_path=args.out)
    suite = _load_suite(run.input_path)
    sc = _load_model(run.model_path)
    check_suite(flatten(sc), suite.cases)
    minimized = minimize_suite(suite, run.strategy)
    table = subsumption_table(suite, run.strategy)
    discarded = {case_id: covering for case_id, covering in table.items() if covering}
    _emit(suite_to_json(minimized, discarded=discarded), run.output_path)
    return EXIT_OK


def cmd_report(args: argparse.Namespace, config: StatecoverConfig) -> int:
    run = _run_config(
        args,
        config,
        input_path=args.model,
        model_path=args.model,
        path_bound=args.path_bound if args.path_bound is not None else config.path_bound,
        output_format=args.format,
        output_path=args.out,
    )
    sc = _load_model(run.input_path)
    suite = _load_suite(args.suite)
    if not suite.cases:
        raise EmptySuite("Coverage report")
    report = coverage_report(sc, suite, run.path_bound)
    text = report_to_table(report) if run.output_format is OutputFormat.TEXT else report_to_json(report)
    _emit(text, run.output_path)
    return EXIT_OK


def cmd_graph(args: argparse.Namespace, config: StatecoverConfig) -> int:
    run = _run_config(args, config, input_path=args.model, k=args.k, output_format=OutputFormat.DOT, output_path=args.out)
    sc = _load_model(run.input_path)
    graph = build_transition_graph(sc)
    if run.k > 1:
        graph = k_fold_transform(graph, run.k)
    _emit(export_dot(augment(graph)), run.output_path)
    return EXIT_OK


def cmd_flatten(args: argparse.Namespace, config: StatecoverConfig) -> int:
    sc = _load_model(args.model)
    _emit(serialize_statechart(flatten(sc)), args.out)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, StatecoverConfig], int]] = {
    "validate": cmd_validate,
    "generate": cmd_generate,
    "minimize": cmd_minimize,
    "report": cmd_report,
    "graph": cmd_graph,
    "flatten": cmd_flatten,
}


def load_configuration(args: argparse.Namespace) -> StatecoverConfig:
    """Load configuration and apply command line overrides."""
    config = StatecoverConfig.from_env_and_file(args.config_file)
    overrides: Dict[str, Any] = {}
    if args.verbose and not args.log_level:
        overrides["log_level"] = "INFO"
    if args.log_level:
        overrides["log_level"] = args.log_level
    if args.log_format:
        overrides["log_format"] = args.log_format
    return config.model_copy(update=overrides) if overrides else config


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    handler = ErrorHandler()
    arguments = {k: v for k, v in vars(args).items() if v is not None}

    try:
        config = load_configuration(args)
    except Exception as e:
        return handler.handle_command_error(e, args.command, arguments)

    setup_logging(config)
    if args.verbose:
        logger.info("statecover", version=__version__, command=args.command)

    try:
        return COMMANDS[args.command](args, config)
    except Exception as e:
        return handler.handle_command_error(e, args.command, arguments)


if __name__ == "__main__":
    sys.exit(main())
