"""
Exhaustive selection of the routing metric and CSMA/CA parameters.

Every configuration of a :class:`SelectionProblem` is solved analytically and checked
against every constraint cell. A cell reports the feasible configuration with the
least maximum node power, the lifetime-limiting quantity.
"""

import dataclasses
import logging
import os
import warnings
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import OptimizeResult

from macaware.flowsolver import (
    Constraints,
    Evaluation,
    check_constraints,
    solve_network,
)
from macaware.mac import MacParams
from macaware.metrics import Q_METRIC, MetricKind
from macaware.selector.problem import SelectionProblem
from macaware.simulation import SimConfig, run_simulation

__all__ = [
    "SelectionResult",
    "select",
    "feasibility_map",
    "INFEASIBLE",
    "MIN_Q_RMIN",
    "TIE_RTOL",
]

logger = logging.getLogger(__name__)

INFEASIBLE = "INFEASIBLE"

# The Q-metric needs a positive reliability floor.
MIN_Q_RMIN = 1e-6

TIE_RTOL = 1e-9

# (metric tag, m0, mb, m, reliability floor of the Q-metric or None)
EvaluationKey = Tuple[str, int, int, int, Optional[float]]
Candidate = Tuple[EvaluationKey, Evaluation]


@dataclasses.dataclass(frozen=True)
class SelectionResult:
    """
    Outcome of :func:`select`.

    Parameters
    ----------
    problem :
        Solved problem.
    cells :
        Result of every constraint cell ``(rmin, dmax)``. Each cell is a
        :class:`scipy.optimize.OptimizeResult` with ``success`` (feasibility), ``x``
        (``(metric tag, m0, mb, m)`` or ``None``), ``fun`` (maximum node power in
        watts, ``inf`` if infeasible), ``metric``, ``params``, ``evaluation``,
        ``nfev`` and ``nfeasible``. Cells re-checked by simulation carry the
        simulated network summary in ``simulated``.
    evaluations :
        Unconstrained evaluation of every configuration.
    """

    problem: SelectionProblem
    cells: Dict[Tuple[float, float], OptimizeResult]
    evaluations: Dict[EvaluationKey, Evaluation]

    def cell(self, rmin: float, dmax: float) -> OptimizeResult:
        return self.cells[(float(rmin), float(dmax))]

    def candidates(self, rmin: float, dmax: float) -> List[Candidate]:
        """
        Evaluations admissible in a cell, checked against its constraints.

        Q-metric evaluations are admissible if their own reliability floor is at least
        as strict as the cell's, so a looser cell admits everything a stricter one
        does.
        """
        constraints = Constraints(rmin=rmin, dmax=dmax)
        admissible = []
        for key, evaluation in self.evaluations.items():
            q_rmin = key[4]
            if q_rmin is not None and q_rmin < max(rmin, MIN_Q_RMIN):
                continue
            checked = check_constraints(evaluation.solution, constraints)
            admissible.append((key, checked))
        return admissible


def _evaluate(
    problem: SelectionProblem, metric: MetricKind, params: MacParams
) -> Evaluation:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        solution = solve_network(
            problem.topo,
            problem.dodag,
            metric,
            params,
            problem.timing,
            problem.profile,
        )
    for warning in caught:
        logger.debug("%s %s: %s", metric.tag, params, warning.message)
    return check_constraints(solution)


def _best(candidates: List[Candidate]) -> Optional[Candidate]:
    feasible = [(key, ev) for key, ev in candidates if ev.feasible]
    if not feasible:
        return None
    best = min(ev.objective for _, ev in feasible)
    tied = [
        (key, ev) for key, ev in feasible if ev.objective <= best + TIE_RTOL * abs(best)
    ]
    # Among equal configurations prefer the strictest Q-metric floor.
    return min(tied, key=lambda item: (item[0][:4], -(item[0][4] or 0.0)))


def _cell_result(
    rmin: float, dmax: float, candidates: List[Candidate], n: int
) -> OptimizeResult:
    best = _best(candidates)
    common = dict(rmin=rmin, dmax=dmax, nfev=len(candidates))
    if best is None:
        return OptimizeResult(
            success=False,
            x=None,
            fun=np.inf,
            metric=None,
            params=None,
            evaluation=None,
            nfeasible=0,
            message="No configuration meets the constraints.",
            **common,
        )
    (tag, m0, mb, m, _), evaluation = best
    return OptimizeResult(
        success=True,
        x=(tag, m0, mb, m),
        fun=evaluation.objective,
        metric=evaluation.solution.metric,
        params=MacParams(m0=m0, mb=mb, m=m, n=n),
        evaluation=evaluation,
        nfeasible=sum(1 for _, ev in candidates if ev.feasible),
        message="Optimal feasible configuration found.",
        **common,
    )


def _validate(
    problem: SelectionProblem,
    cells: Dict[Tuple[float, float], OptimizeResult],
    sim_config: SimConfig,
):
    simulated = {}
    for cell in cells.values():
        if not cell.success:
            continue
        key = (cell.x, cell.metric.rmin)
        if key not in simulated:
            config = sim_config.replace(
                mac=cell.params,
                metric=cell.metric,
                timing=problem.timing,
                profile=problem.profile,
            )
            _, report = run_simulation(problem.topo, problem.dodag, config)
            simulated[key] = report.summary()
            logger.info("simulated %s: %s", "/".join(map(str, cell.x)), simulated[key])
        cell.simulated = simulated[key]


def select(
    problem: SelectionProblem,
    validate_sim: bool = False,
    sim_config: Optional[SimConfig] = None,
) -> SelectionResult:
    """
    Best feasible configuration of every constraint cell.

    Metrics other than the Q-metric route independently of the constraints and are
    solved once per MAC configuration. The Q-metric is solved once per MAC
    configuration and reliability floor of the grid, floored at
    :data:`MIN_Q_RMIN`. Objectives within a relative :data:`TIE_RTOL` count as equal
    and are broken by the lexicographic order of ``(metric tag, m0, mb, m)``.

    Parameters
    ----------
    problem :
        Selection problem.
    validate_sim :
        Whether to re-check every chosen configuration with one simulation run.
    sim_config :
        Base configuration of the validation runs; MAC parameters, metric, timing
        and profile are taken from the cell.

    Returns
    -------
    result :
        Cell results and the evaluations they were chosen from.

    Examples
    --------
    >>> from macaware.selector import SelectionProblem, select
    >>> from macaware.topology import load_fixture
    >>> problem = SelectionProblem(
    ...     load_fixture("star5"), rmin_grid=[0.0, 1.0], m0_range=[3], mb_range=[3, 4],
    ...     m_range=[0, 1],
    ... )
    >>> result = select(problem)
    >>> result.cell(1.0, float("inf")).success
    False
    >>> result.cell(0.0, float("inf")).x
    ('Q_METRIC', 3, 3, 0)
    """
    evaluations: Dict[EvaluationKey, Evaluation] = {}
    q_floors = sorted({max(rmin, MIN_Q_RMIN) for rmin in problem.rmin_grid})
    for params in problem.configurations():
        for tag in problem.metrics:
            floors = q_floors if tag == Q_METRIC else [None]
            for floor in floors:
                metric = MetricKind(tag) if floor is None else MetricKind(tag, floor)
                key = (tag, params.m0, params.mb, params.m, floor)
                evaluations[key] = _evaluate(problem, metric, params)
    logger.info(
        "evaluated %d configurations over %d constraint cells",
        len(evaluations),
        len(problem.rmin_grid) * len(problem.dmax_grid),
    )

    result = SelectionResult(problem=problem, cells={}, evaluations=evaluations)
    for rmin, dmax in problem.cells:
        candidates = result.candidates(rmin, dmax)
        result.cells[(rmin, dmax)] = _cell_result(rmin, dmax, candidates, problem.n)

    if validate_sim:
        _validate(problem, result.cells, sim_config or SimConfig())
    return result


def feasibility_map(
    result: SelectionResult, path: Optional[os.PathLike] = None
) -> pd.DataFrame:
    """
    Grid of the chosen configurations.

    Rows are reliability floors and columns delay bounds. Cells read
    ``metric/m0/mb/m`` or :data:`INFEASIBLE`. An empty search space gives an empty
    frame.

    Parameters
    ----------
    result :
        Result of :func:`select`.
    path :
        If given, the map is written there as CSV.
    """
    if not result.evaluations:
        frame = pd.DataFrame()
    else:
        frame = pd.DataFrame(
            [
                [
                    "/".join(map(str, result.cell(rmin, dmax).x))
                    if result.cell(rmin, dmax).success
                    else INFEASIBLE
                    for dmax in result.problem.dmax_grid
                ]
                for rmin in result.problem.rmin_grid
            ],
            index=pd.Index(result.problem.rmin_grid, name="rmin"),
            columns=pd.Index(result.problem.dmax_grid, name="dmax"),
        )
    if path is not None:
        with open(os.fspath(path), "w", encoding="utf-8", newline="") as file:
            file.write(frame.to_csv() if not frame.empty else "")
    return frame
