"""Subcommands of the ``macaware`` program."""

import logging
import os
import sys
from typing import Optional

import pandas as pd

from macaware.cli.config import ExperimentConfig, parse_sweep
from macaware.flowsolver import solve_network
from macaware.metrics import BACKPRESSURE, MetricKind
from macaware.selector import SelectionProblem, feasibility_map, select
from macaware.simulation import replicate, run_simulation
from macaware.topology import build_dodag, generate_random_topology, save_topology

__all__ = [
    "EXIT_OK",
    "EXIT_INPUT_ERROR",
    "EXIT_NOT_CONVERGED",
    "cmd_solve",
    "cmd_simulate",
    "cmd_compare",
    "cmd_select",
    "cmd_gen_topology",
    "COMMANDS",
]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NOT_CONVERGED = 2


def _emit(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
        return
    with open(os.fspath(path), "w", encoding="utf-8", newline="") as file:
        file.write(text)
    logger.info("wrote %s", path)


def cmd_solve(config: ExperimentConfig) -> int:
    """Solve the configured network and write the per-node CSV."""
    topo = config.load_topology()
    solution = solve_network(
        topo,
        metric=config.metric_kind,
        params=config.mac,
        timing=config.timing,
        profile=config.profile,
        maxiter=config.maxiter,
    )
    _emit(solution.to_csv(), config.out)
    if not solution.converged:
        logger.error(
            "fixed point did not converge after %d iterations", solution.iterations
        )
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_simulate(config: ExperimentConfig) -> int:
    """
    Simulate ``replications`` independent runs and write per-node means with 95%
    confidence half widths.

    With a rate sweep, every non-root node generates the swept rate (before traffic
    overrides) and the CSV has one row per rate and node.
    """
    base = config.load_topology()
    dodag = build_dodag(base)
    sim_config = config.sim_config()
    if config.lambda_sweep is None:
        summary = replicate(base, dodag, sim_config, config.replications)
        frame = summary.frame
    else:
        frames = []
        for rate in parse_sweep(config.lambda_sweep):
            topo = base.with_traffic(config.traffic, default=float(rate))
            summary = replicate(topo, dodag, sim_config, config.replications)
            frames.append(summary.frame.assign(lambda_pps=float(rate)))
        frame = pd.concat(frames, ignore_index=True)
        columns = ["lambda_pps"] + [c for c in frame.columns if c != "lambda_pps"]
        frame = frame[columns]
    _emit(frame.to_csv(index=False), config.out)
    if config.trace is not None:
        trace, _ = run_simulation(base, dodag, sim_config, run_index=0)
        trace.to_jsonl(config.trace)
        logger.info("wrote trace %s", config.trace)
    return EXIT_OK


def cmd_compare(config: ExperimentConfig) -> int:
    """
    Evaluate every metric of ``config.metrics`` on the same topology and seed.

    Blocks are stacked with ``metric`` and ``source`` (``model`` or ``simulation``)
    columns and share the node order of the topology. The analytic back-pressure
    iterate follows queue differentials that keep moving, so its block is the last
    iterate and its non-convergence is logged rather than reported in the exit
    status.
    """
    topo = config.load_topology()
    dodag = build_dodag(topo)
    blocks = []
    status = EXIT_OK
    for tag in config.metrics:
        metric = MetricKind(tag, rmin=config.rmin, bp_weight=config.bp_weight)
        if config.compare_mode in ("solve", "both"):
            solution = solve_network(
                topo,
                dodag,
                metric,
                config.mac,
                config.timing,
                config.profile,
                maxiter=config.maxiter,
            )
            if not solution.converged and tag == BACKPRESSURE:
                logger.warning(
                    "back-pressure iterate did not settle after %d iterations",
                    solution.iterations,
                )
            elif not solution.converged:
                status = EXIT_NOT_CONVERGED
            block = solution.to_frame().assign(switches=float("nan"))
            blocks.append(block.assign(metric=tag, source="model"))
        if config.compare_mode in ("simulate", "both"):
            summary = replicate(
                topo, dodag, config.sim_config(metric=metric), config.replications
            )
            blocks.append(summary.frame.assign(metric=tag, source="simulation"))
    frame = pd.concat(blocks, ignore_index=True)
    leading = ["metric", "source", "node"]
    frame = frame[leading + [c for c in frame.columns if c not in leading]]
    _emit(frame.to_csv(index=False), config.out)
    return status


def cmd_select(config: ExperimentConfig) -> int:
    """Run the exhaustive selection and write the feasibility map."""
    topo = config.load_topology()
    problem = SelectionProblem(
        topo,
        rmin_grid=config.rmin_grid,
        dmax_grid=config.dmax_grid,
        m0_range=config.m0_range,
        mb_range=config.mb_range,
        m_range=config.m_range,
        metrics=config.metrics,
        n=config.mac.n,
        timing=config.timing,
        profile=config.profile,
    )
    result = select(
        problem, validate_sim=config.validate_sim, sim_config=config.sim_config()
    )
    frame = feasibility_map(result)
    _emit(frame.to_csv() if not frame.empty else "", config.out)
    return EXIT_OK


def cmd_gen_topology(config: ExperimentConfig) -> int:
    """Write a random layered topology."""
    topo = generate_random_topology(config.n_nodes, config.seed, config.density)
    _emit(save_topology(topo), config.out)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "select": cmd_select,
    "gen-topology": cmd_gen_topology,
}
