"""Damped fixed-point iteration of the MAC/routing loop."""

import logging
import warnings
from typing import Dict, List, Tuple

import numpy as np

from macaware import utils
from macaware.flowsolver.flowbalance import alpha_from_traffic, traffic_fixed_point
from macaware.flowsolver.networksolution import NetworkSolution
from macaware.mac import (
    LinkState,
    MacParams,
    PowerProfile,
    Timing,
    expected_queueing_delay,
    link_state,
    node_power,
)
from macaware.metrics import (
    BACKPRESSURE,
    ETX,
    Q_METRIC,
    R_METRIC,
    MetricKind,
    build_selection_matrix,
    end_to_end_reliability,
    path_to_root,
    select_parent_backpressure,
    select_parent_etx,
    select_parent_q_metric,
    select_parent_r_metric,
)
from macaware.topology import Dodag, Topology
from macaware.type import NodeIdType

__all__ = ["FlowBalanceSolver"]

logger = logging.getLogger(__name__)

Link = Tuple[NodeIdType, NodeIdType]
Choices = Dict[NodeIdType, NodeIdType]


class FlowBalanceSolver:
    """
    Fixed-point solver closing the loop between MAC performance and routing.

    Starting from a busy channel probability ``alpha0`` everywhere, every iteration
    evaluates all candidate links with the MAC model, lets every node choose a
    parent with the routing metric, solves the flow balance for the traffic
    :math:`Q`, and moves :math:`\\alpha` by ``damping`` towards the occupancy implied
    by :math:`Q`. The iteration stops once :math:`\\alpha` changes by less than
    ``atol`` and no parent changed.

    Parameters
    ----------
    topo :
        Network topology.
    dodag :
        DODAG of ``topo``.
    metric :
        Routing metric.
    params :
        CSMA/CA parameters.
    timing :
        Radio timing constants.
    profile :
        Radio power profile.
    damping :
        Step towards the new busy channel probabilities, in :math:`(0, 1]`.
    atol :
        Tolerance on the maximum change of :math:`\\alpha`.
    maxiter :
        Maximum number of iterations.
    alpha0 :
        Initial busy channel probability of every node.

    Notes
    -----
    Parent selection per metric:

    * ``R_METRIC`` and ``ETX`` are evaluated in increasing rank, so that every node
      sees the end-to-end values its candidates obtain with their own choices.
    * ``Q_METRIC`` starts from the R-metric selection at the current
      :math:`\\alpha` and lets nodes respond in decreasing rank, repeating until no
      parent changes. Each node reads the loads :math:`Q_j` its candidates advertise
      from the previous traffic iterate, with its own traffic moved onto the
      candidate under evaluation. The selection is thus a function of :math:`\\alpha`
      alone and the fixed point does not depend on ``alpha0``. Nodes without
      feasible candidate fall back to the R-metric choice and are flagged.
    * ``BACKPRESSURE`` uses mean queue lengths of the previous iterate from Little's
      law, :math:`L_i = Q_i (W_i + S_i)`.
    """

    def __init__(
        self,
        topo: Topology,
        dodag: Dodag,
        metric: MetricKind,
        params: MacParams = MacParams(),
        timing: Timing = Timing(),
        profile: PowerProfile = PowerProfile(),
        damping: float = 0.5,
        atol: float = 1e-6,
        maxiter: int = 500,
        alpha0: float = 0.0,
    ):
        if dodag.node_ids != topo.node_ids:
            raise ValueError("DODAG and topology describe different node sets.")
        if not 0.0 < damping <= 1.0:
            raise ValueError(f"damping must lie in (0, 1], got {damping}.")
        if not atol > 0.0:
            raise ValueError(f"atol must be positive, got {atol}.")
        self.topo = topo
        self.dodag = dodag
        self.metric = metric
        self.params = params
        self.timing = timing
        self.profile = profile
        self.damping = float(damping)
        self.atol = float(atol)
        self.maxiter = utils.as_count(maxiter, "maxiter", lower=1)
        self.alpha0 = utils.as_probability(alpha0, "alpha0")

        self.nodes = topo.node_ids
        self._index = {node_id: idx for idx, node_id in enumerate(self.nodes)}
        self._lambda = topo.lambdas
        self._links: List[Link] = [
            (i, j) for i in dodag.non_root() for j in dodag.candidates(i)
        ]

    def link_states(self, alpha: np.ndarray) -> Dict[Link, LinkState]:
        """MAC model evaluation of every candidate link."""
        return {
            (i, j): link_state(
                alpha[self._index[i]], self.topo.p_bad(i, j), self.params, self.timing
            )
            for i, j in self._links
        }

    def _reliability_matrix(self, states: Dict[Link, LinkState]) -> np.ndarray:
        mat = np.zeros((len(self.nodes), len(self.nodes)))
        for (i, j), state in states.items():
            mat[self._index[i], self._index[j]] = state.reliability
        return mat

    def _path_reliability(
        self, choices: Choices, states: Dict[Link, LinkState]
    ) -> Dict[NodeIdType, float]:
        path_R = {self.dodag.root_id: 1.0}
        for i in self.dodag.by_rank():
            if i in choices:
                path_R[i] = states[(i, choices[i])].reliability * path_R[choices[i]]
        return path_R

    def _choose_by_rank(self, states: Dict[Link, LinkState], use_etx: bool) -> Choices:
        choices = {}
        downstream = {self.dodag.root_id: 0.0 if use_etx else 1.0}
        for i in self.dodag.by_rank():
            if i == self.dodag.root_id:
                continue
            candidates = self.dodag.candidates(i)
            if use_etx:
                link_etx = {j: states[(i, j)].etx for j in candidates}
                parent = select_parent_etx(i, candidates, link_etx, downstream)
                downstream[i] = link_etx[parent] + downstream[parent]
            else:
                link_R = {j: states[(i, j)].reliability for j in candidates}
                parent = select_parent_r_metric(i, candidates, link_R, downstream)
                downstream[i] = link_R[parent] * downstream[parent]
            choices[i] = parent
        return choices

    def _advertised_traffic(
        self, i: NodeIdType, choices: Choices, q: np.ndarray, rel: np.ndarray
    ) -> Dict[NodeIdType, Tuple[float, float]]:
        # Q_j of the previous iterate with the traffic of i moved onto j. Q_i does not
        # depend on i's parent, and no candidate lies in the subtree of i.
        idx = self._index[i]
        traffic = {}
        for j in self.dodag.candidates(i):
            jdx = self._index[j]
            q_j = q[jdx]
            if choices.get(i) != j:
                q_j += rel[idx, jdx] * q[idx]
            traffic[j] = (float(q_j), float(self._lambda[jdx]))
        return traffic

    def _choose_q_metric(
        self, states: Dict[Link, LinkState]
    ) -> Tuple[Choices, List[NodeIdType]]:
        rel = self._reliability_matrix(states)
        power = (self.profile.p_tx, self.profile.p_rx)
        choices = self._choose_by_rank(states, use_etx=False)
        order = [i for i in self.dodag.by_rank(descending=True) if i in choices]
        flagged: List[NodeIdType] = []
        for _ in range(len(order)):
            previous = dict(choices)
            flagged = []
            for i in order:
                q = traffic_fixed_point(
                    self._lambda, build_selection_matrix(self.dodag, choices), rel
                )
                candidates = self.dodag.candidates(i)
                path_R = self._path_reliability(choices, states)
                link_R = {j: states[(i, j)].reliability for j in candidates}
                parent = select_parent_q_metric(
                    i,
                    candidates,
                    self._advertised_traffic(i, choices, q, rel),
                    {j: power for j in candidates},
                    link_R,
                    path_R,
                    self.metric.rmin,
                )
                if parent is None:
                    parent = select_parent_r_metric(i, candidates, link_R, path_R)
                    flagged.append(i)
                choices[i] = parent
            if choices == previous:
                break
        return choices, [i for i in self.dodag.non_root() if i in flagged]

    def _queue_lengths(
        self, states: Dict[Link, LinkState], choices: Choices, q: np.ndarray
    ) -> Dict[NodeIdType, float]:
        lengths = {self.dodag.root_id: 0.0}
        for i, parent in choices.items():
            state = states[(i, parent)]
            q_i = q[self._index[i]]
            waiting = expected_queueing_delay(
                q_i, state.alpha, state.gamma, self.params, self.timing
            )
            lengths[i] = q_i * (waiting + state.delay)
        return lengths

    def _choose_backpressure(
        self, states: Dict[Link, LinkState], previous: Choices, q: np.ndarray
    ) -> Choices:
        lengths = self._queue_lengths(states, previous, q)
        choices = {}
        for i in self.dodag.non_root():
            candidates = self.dodag.candidates(i)
            etx = {j: states[(i, j)].etx for j in candidates}
            choices[i] = select_parent_backpressure(
                i, candidates, lengths, etx, self.metric.bp_weight
            )
        return choices

    def _choose(
        self, states: Dict[Link, LinkState], previous: Choices, q: np.ndarray
    ) -> Tuple[Choices, List[NodeIdType]]:
        tag = self.metric.tag
        if tag == R_METRIC:
            return self._choose_by_rank(states, use_etx=False), []
        if tag == ETX:
            return self._choose_by_rank(states, use_etx=True), []
        if tag == Q_METRIC:
            return self._choose_q_metric(states)
        if tag == BACKPRESSURE:
            return self._choose_backpressure(states, previous, q), []
        raise ValueError(f"Unsupported metric {tag!r}.")

    def solve(self) -> NetworkSolution:
        """
        Iterate to the fixed point.

        Returns
        -------
        solution :
            Converged solution, or the last iterate with ``converged=False``.
        """
        n_nodes = len(self.nodes)
        alpha = np.full(n_nodes, self.alpha0)
        choices = self._choose_by_rank(
            self.link_states(np.zeros(n_nodes)), use_etx=False
        )
        states = self.link_states(alpha)
        q = traffic_fixed_point(
            self._lambda,
            build_selection_matrix(self.dodag, choices),
            self._reliability_matrix(states),
        )

        converged = False
        flagged: List[NodeIdType] = []
        iteration = 0
        for iteration in range(1, self.maxiter + 1):
            states = self.link_states(alpha)
            new_choices, flagged = self._choose(states, choices, q)
            selection = build_selection_matrix(self.dodag, new_choices)
            q = traffic_fixed_point(
                self._lambda, selection, self._reliability_matrix(states)
            )
            target = alpha_from_traffic(q, self.topo, self.timing)
            new_alpha = alpha + self.damping * (target - alpha)
            delta = float(np.max(np.abs(new_alpha - alpha)))
            stable = new_choices == choices
            logger.debug(
                "iteration %d: max |dalpha| = %.3e, selection %s",
                iteration,
                delta,
                "stable" if stable else "changed",
            )
            choices, alpha = new_choices, new_alpha
            if delta < self.atol and stable:
                converged = True
                break

        if converged:
            logger.info(
                "%s fixed point converged after %d iterations",
                self.metric.tag,
                iteration,
            )
        else:
            warnings.warn(
                f"Fixed-point iteration for {self.metric.tag} did not converge within "
                f"{self.maxiter} iterations.",
                RuntimeWarning,
            )
        return self._solution(choices, alpha, iteration, converged, flagged)

    def _solution(
        self,
        choices: Choices,
        alpha: np.ndarray,
        iterations: int,
        converged: bool,
        flagged: List[NodeIdType],
    ) -> NetworkSolution:
        states = self.link_states(alpha)
        rel = self._reliability_matrix(states)
        selection = build_selection_matrix(self.dodag, choices)
        q = traffic_fixed_point(self._lambda, selection, rel)

        n_nodes = len(self.nodes)
        service = np.zeros(n_nodes)
        waiting = np.zeros(n_nodes)
        power = np.full(n_nodes, np.nan)
        for i, parent in choices.items():
            idx = self._index[i]
            state = states[(i, parent)]
            service[idx] = state.delay
            waiting[idx] = expected_queueing_delay(
                q[idx], state.alpha, state.gamma, self.params, self.timing
            )
            power[idx] = self._node_power(i, q[idx], state)

        e2e_reliability = np.array(
            [end_to_end_reliability(i, selection, rel) for i in self.nodes]
        )
        hop_delay = service + waiting
        e2e_delay = np.array(
            [
                sum(hop_delay[self._index[k]] for k in path_to_root(i, selection)[:-1])
                for i in self.nodes
            ]
        )
        return NetworkSolution(
            nodes=self.nodes,
            root_id=self.dodag.root_id,
            metric=self.metric,
            lambda_=self._lambda.copy(),
            q=q,
            alpha=alpha,
            selection=selection,
            link_reliability=rel,
            e2e_reliability=e2e_reliability,
            e2e_delay=e2e_delay,
            service_delay=service,
            queue_delay=waiting,
            node_power=power,
            converged=converged,
            iterations=iterations,
            flagged=tuple(flagged),
        )

    def _node_power(self, node_id: NodeIdType, q_i: float, state: LinkState) -> float:
        rx_rate = max(q_i - self._lambda[self._index[node_id]], 0.0)
        try:
            return node_power(
                q_i,
                rx_rate,
                state.alpha,
                state.gamma,
                self.params,
                self.timing,
                self.profile,
            )
        except ValueError as err:
            warnings.warn(f"Node {node_id}: {err}", RuntimeWarning)
            return float("inf")
