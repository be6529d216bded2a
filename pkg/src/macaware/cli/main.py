"""Argument parsing and entry point of the ``macaware`` program."""

import argparse
import json
import logging
import sys
from typing import Dict, Optional, Sequence

from macaware.cli.commands import COMMANDS, EXIT_INPUT_ERROR
from macaware.cli.config import (
    ExperimentConfig,
    parse_assignments,
    parse_grid,
    parse_metrics,
    parse_space,
)

__all__ = ["build_parser", "main"]

logger = logging.getLogger(__name__)

_MAC_FIELDS = ("m0", "mb", "m", "n")


def _mac_overrides(text: str) -> Dict[str, int]:
    values = parse_assignments(text, "MAC parameter")
    unknown = set(values) - set(_MAC_FIELDS)
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown MAC parameters {sorted(unknown)}, expected {_MAC_FIELDS}"
        )
    if any(not value.is_integer() for value in values.values()):
        raise argparse.ArgumentTypeError(f"MAC parameters must be integers: {text!r}")
    return {key: int(value) for key, value in values.items()}


def _argument_type(parse):
    def convert(text):
        try:
            return parse(text)
        except ValueError as err:
            raise argparse.ArgumentTypeError(str(err)) from None

    convert.__name__ = parse.__name__
    return convert


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("network and metric")
    group.add_argument("--topology", help="topology file or packaged fixture name")
    group.add_argument("--metric", help="routing metric: r, q, etx or backpressure")
    group.add_argument("--rmin", type=float, help="reliability floor of the Q-metric")
    group.add_argument("--bp-weight", type=float, help="link weight of back-pressure")
    group.add_argument(
        "--mac",
        type=_mac_overrides,
        metavar="KEY=VALUE,...",
        help="CSMA/CA parameters, e.g. m0=3,mb=5,m=4,n=3",
    )
    group.add_argument(
        "--lambda",
        dest="traffic",
        action="append",
        metavar="NODE=RATE",
        help="generation rate of one node in packets per second (repeatable)",
    )
    group.add_argument(
        "--lambda-all",
        type=float,
        metavar="RATE",
        help="generation rate of every non-root node, before --lambda overrides",
    )
    group.add_argument(
        "--maxiter", type=int, help="iteration limit of the fixed-point solver"
    )

    group = common.add_argument_group("run")
    group.add_argument("--seed", type=int, help="seed of all random streams")
    group.add_argument("--out", help="output path, standard output if omitted")
    group.add_argument("--config", help="JSON file with ExperimentConfig fields")
    group.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log run summaries, twice for solver traces",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    """
    Parser of the ``macaware`` command line.

    Shared options are accepted after every subcommand. Options default to ``None``
    so that values of ``--config`` are only replaced by options that were given.

    Examples
    --------
    >>> from macaware.cli import build_parser
    >>> args = build_parser().parse_args(
    ...     ["solve", "--topology", "fig1a", "--lambda", "V2=20"]
    ... )
    >>> args.command, args.topology, args.traffic
    ('solve', 'fig1a', ['V2=20'])
    """
    common = _common_arguments()
    parser = argparse.ArgumentParser(
        prog="macaware",
        description="MAC-aware routing analysis for IEEE 802.15.4 networks.",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    subparsers.add_parser(
        "solve", parents=[common], help="solve the analytical model, per-node CSV"
    )

    simulate = subparsers.add_parser(
        "simulate", parents=[common], help="simulate replications, per-node CSV"
    )
    simulate.add_argument("--duration", type=float, help="simulated seconds per run")
    simulate.add_argument("--warmup", type=float, help="discarded initial seconds")
    simulate.add_argument(
        "--arrival", choices=("periodic-jitter", "poisson"), help="arrival process"
    )
    simulate.add_argument("--replications", type=int, help="independent runs")
    simulate.add_argument("--trace", help="JSON-lines trace of the first run")
    simulate.add_argument(
        "--lambda-sweep",
        metavar="START:STOP:logN|linN",
        help="sweep the rate of every non-root node over N points",
    )

    select = subparsers.add_parser(
        "select", parents=[common], help="constrained MAC and metric selection"
    )
    select.add_argument(
        "--rmin-grid", type=_argument_type(parse_grid), help="reliability floors"
    )
    select.add_argument(
        "--dmax-grid", type=_argument_type(parse_grid), help="delay bounds in seconds"
    )
    select.add_argument(
        "--space",
        type=_argument_type(parse_space),
        metavar="m0=A:B,mb=A:B,m=A:B",
        help="inclusive search ranges",
    )
    select.add_argument(
        "--metrics", type=_argument_type(parse_metrics), help="metrics to search"
    )
    select.add_argument(
        "--validate-sim",
        action="store_true",
        default=None,
        help="re-check chosen configurations by simulation",
    )
    select.add_argument("--duration", type=float, help="seconds of validation runs")

    compare = subparsers.add_parser(
        "compare", parents=[common], help="compare metrics on one network"
    )
    compare.add_argument(
        "--metrics",
        type=_argument_type(parse_metrics),
        help="comma separated metrics, e.g. r,q,backpressure",
    )
    compare.add_argument(
        "--mode",
        dest="compare_mode",
        choices=("solve", "simulate", "both"),
        help="analytical model, simulation or both",
    )
    compare.add_argument("--duration", type=float, help="simulated seconds per run")
    compare.add_argument("--replications", type=int, help="independent runs")

    gen = subparsers.add_parser(
        "gen-topology", parents=[common], help="write a random layered topology"
    )
    gen.add_argument("--n-nodes", type=int, help="number of nodes including the root")
    gen.add_argument("--density", type=float, help="mean links per node")
    return parser


def _configure_logging(verbosity: int):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _to_config(args: argparse.Namespace) -> ExperimentConfig:
    overrides = dict(vars(args))
    command = overrides.pop("command")
    overrides.pop("verbose")
    path = overrides.pop("config")
    space = overrides.pop("space", None) or {}
    for key, values in space.items():
        overrides[f"{key}_range"] = values
    base = ExperimentConfig() if path is None else ExperimentConfig.from_json(path)
    return base.merged_with(overrides).merged_with({"mode": command})


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the ``macaware`` program.

    Parameters
    ----------
    argv :
        Arguments without the program name; ``sys.argv[1:]`` if not given.

    Returns
    -------
    status :
        0 on success, 1 on invalid input and 2 if the fixed point did not converge.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        # argparse exits with 2 on usage errors; 2 is reserved for non-convergence.
        return EXIT_INPUT_ERROR if exit_.code else 0
    _configure_logging(args.verbose)
    try:
        config = _to_config(args)
        logger.debug("configuration %s", config)
        return COMMANDS[config.mode](config)
    except (ValueError, TypeError, KeyError, OSError) as err:
        # JSONDecodeError is a ValueError, FileNotFoundError an OSError.
        if isinstance(err, json.JSONDecodeError):
            message = f"invalid JSON in configuration: {err}"
        else:
            message = str(err).strip("'\"")
        print(f"macaware: error: {message}", file=sys.stderr)
        return EXIT_INPUT_ERROR
