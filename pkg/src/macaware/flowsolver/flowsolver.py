"""
Analytical evaluation of a network configuration.

This module provides the entry points of the flow-balance solver: solving the
MAC/routing loop of a topology for one routing metric and MAC configuration, and
checking the solution against per-node reliability and delay constraints.
"""

import dataclasses
import math
from typing import Mapping, Optional, Tuple, Union

import numpy as np

from macaware.flowsolver.networksolution import NetworkSolution
from macaware.flowsolver.networksolver import FlowBalanceSolver
from macaware.mac import MacParams, PowerProfile, Timing
from macaware.metrics import MetricKind
from macaware.topology import Dodag, Topology, build_dodag
from macaware.type import NodeIdType

__all__ = [
    "solve_network",
    "Constraints",
    "Evaluation",
    "evaluate_configuration",
    "check_constraints",
]


def solve_network(
    topo: Topology,
    dodag: Optional[Dodag] = None,
    metric: MetricKind = MetricKind("R_METRIC"),
    params: MacParams = MacParams(),
    timing: Timing = Timing(),
    profile: PowerProfile = PowerProfile(),
    **kwargs,
) -> NetworkSolution:
    """
    Solve the MAC/routing loop of a network.

    Parameters
    ----------
    topo :
        Network topology with traffic rates.
    dodag :
        DODAG of ``topo``. Built with :func:`~macaware.topology.build_dodag` if not
        given.
    metric :
        Routing metric.
    params :
        CSMA/CA parameters.
    timing :
        Radio timing constants.
    profile :
        Radio power profile.
    kwargs :
        Options of :class:`FlowBalanceSolver`: ``damping``, ``atol``, ``maxiter``
        and ``alpha0``.

    Returns
    -------
    solution :
        Traffic, busy channel probabilities, selection and end-to-end performance.
        If the iteration did not converge, the last iterate is returned with
        ``converged=False`` and a :class:`RuntimeWarning` is issued.

    See Also
    --------
    evaluate_configuration : Check a solution against constraints.

    Examples
    --------
    >>> from macaware.flowsolver import solve_network
    >>> from macaware.metrics import MetricKind
    >>> from macaware.topology import load_fixture
    >>> solution = solve_network(load_fixture("star5"), metric=MetricKind("R_METRIC"))
    >>> solution.converged
    True
    >>> solution.parent_of("V3")
    'V0'
    """
    if dodag is None:
        dodag = build_dodag(topo)
    solver = FlowBalanceSolver(topo, dodag, metric, params, timing, profile, **kwargs)
    return solver.solve()


@dataclasses.dataclass(frozen=True)
class Constraints:
    """
    Per-node end-to-end requirements.

    Parameters
    ----------
    rmin :
        Minimum end-to-end reliability, one value for all nodes or per node.
    dmax :
        Maximum end-to-end delay in seconds, one value for all nodes or per node.
    """

    rmin: Union[float, Mapping[NodeIdType, float]] = 0.0
    dmax: Union[float, Mapping[NodeIdType, float]] = math.inf

    def rmin_for(self, node_id: NodeIdType) -> float:
        if isinstance(self.rmin, Mapping):
            return float(self.rmin.get(node_id, 0.0))
        return float(self.rmin)

    def dmax_for(self, node_id: NodeIdType) -> float:
        if isinstance(self.dmax, Mapping):
            return float(self.dmax.get(node_id, math.inf))
        return float(self.dmax)


@dataclasses.dataclass(frozen=True)
class Evaluation:
    """
    Outcome of :func:`evaluate_configuration`.

    Parameters
    ----------
    feasible :
        Whether the solution converged and meets all constraints.
    objective :
        Maximum power over non-root nodes in watts, the quantity to minimize.
    solution :
        Underlying network solution.
    violations :
        Nodes violating a constraint.
    """

    feasible: bool
    objective: float
    solution: NetworkSolution
    violations: Tuple[NodeIdType, ...] = ()


def evaluate_configuration(
    topo: Topology,
    metric: MetricKind,
    params: MacParams,
    timing: Timing = Timing(),
    profile: PowerProfile = PowerProfile(),
    constraints: Constraints = Constraints(),
    dodag: Optional[Dodag] = None,
) -> Evaluation:
    """
    Solve a configuration and check it against end-to-end constraints.

    A configuration is feasible if the fixed point converged, no node is saturated
    and every non-root node meets its reliability floor and delay bound.

    Examples
    --------
    >>> from macaware.flowsolver import Constraints, evaluate_configuration
    >>> from macaware.mac import MacParams
    >>> from macaware.metrics import MetricKind
    >>> from macaware.topology import load_fixture
    >>> evaluation = evaluate_configuration(
    ...     load_fixture("star5"), MetricKind("R_METRIC"), MacParams(),
    ...     constraints=Constraints(rmin=1.0),
    ... )
    >>> evaluation.feasible
    False
    """
    solution = solve_network(topo, dodag, metric, params, timing, profile)
    return check_constraints(solution, constraints)


def check_constraints(
    solution: NetworkSolution, constraints: Constraints = Constraints()
) -> Evaluation:
    """
    Check a solved network against end-to-end constraints.

    Routing under the R-metric does not depend on the constraints, so one solution
    can be checked against a whole grid of them.
    """
    violations = []
    for idx, node_id in enumerate(solution.nodes):
        if node_id == solution.root_id:
            continue
        if solution.e2e_reliability[idx] < constraints.rmin_for(node_id):
            violations.append(node_id)
        elif not solution.e2e_delay[idx] <= constraints.dmax_for(node_id):
            violations.append(node_id)
    objective = solution.max_power
    feasible = solution.converged and not violations and bool(np.isfinite(objective))
    return Evaluation(
        feasible=feasible,
        objective=objective,
        solution=solution,
        violations=tuple(violations),
    )
