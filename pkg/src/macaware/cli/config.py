"""Experiment configuration shared by all subcommands."""

import argparse
import dataclasses
import json
import math
import os
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from macaware.mac import MacParams, PowerProfile, Timing
from macaware.metrics import MetricKind
from macaware.simulation import SimConfig
from macaware.topology import FIXTURES, Topology, load_fixture, load_topology
from macaware.type import DocumentArgType, NodeIdType

__all__ = [
    "ExperimentConfig",
    "parse_assignments",
    "parse_grid",
    "parse_space",
    "parse_sweep",
    "parse_metrics",
]

_NESTED = ("mac", "timing", "profile")


def parse_assignments(items, name: str = "assignment") -> Dict[str, float]:
    """
    Parse ``KEY=VALUE`` pairs, given as a list or one comma separated string.

    Examples
    --------
    >>> from macaware.cli import parse_assignments
    >>> parse_assignments(["V2=20", "V3=1.5"])
    {'V2': 20.0, 'V3': 1.5}
    """
    if isinstance(items, str):
        items = [item for item in items.split(",") if item.strip()]
    parsed = {}
    for item in items:
        key, sep, value = str(item).partition("=")
        if not sep or not key.strip():
            raise ValueError(f"Malformed {name} {item!r}, expected KEY=VALUE.")
        try:
            parsed[key.strip()] = float(value)
        except ValueError:
            raise ValueError(f"Malformed {name} {item!r}.") from None
    return parsed


def parse_grid(text: str) -> Tuple[float, ...]:
    """
    Parse a comma separated list of numbers; ``inf`` is allowed.

    Examples
    --------
    >>> from macaware.cli import parse_grid
    >>> parse_grid("0.9, 0.5,inf")
    (0.9, 0.5, inf)
    """
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ValueError(f"Malformed grid {text!r}.") from None


def parse_space(text: str) -> Dict[str, Tuple[int, ...]]:
    """
    Parse a search space such as ``m0=3:8,mb=3:8,m=0:4``; bounds are inclusive.

    Examples
    --------
    >>> from macaware.cli import parse_space
    >>> parse_space("m0=3:4,m=0:0")
    {'m0': (3, 4), 'm': (0,)}
    """
    space = {}
    for item in (part.strip() for part in text.split(",")):
        if not item:
            continue
        key, sep, bounds = item.partition("=")
        if key not in ("m0", "mb", "m") or not sep:
            raise ValueError(f"Malformed search space entry {item!r}.")
        low, sep, high = bounds.partition(":")
        try:
            low = int(low)
            high = int(high) if sep else low
        except ValueError:
            raise ValueError(f"Malformed range {bounds!r} of {key}.") from None
        space[key] = tuple(range(low, high + 1))
    return space


def parse_sweep(text: str) -> np.ndarray:
    """
    Parse a rate sweep ``start:stop:logN`` or ``start:stop:linN`` of ``N`` points.

    Examples
    --------
    >>> from macaware.cli import parse_sweep
    >>> parse_sweep("0.1:10:log3")
    array([ 0.1,  1. , 10. ])
    >>> parse_sweep("1:3:lin3")
    array([1., 2., 3.])
    """
    parts = text.split(":")
    if len(parts) != 3 or parts[2][:3] not in ("log", "lin"):
        raise ValueError(f"Malformed sweep {text!r}, expected start:stop:logN|linN.")
    try:
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2][3:])
    except ValueError:
        raise ValueError(f"Malformed sweep {text!r}.") from None
    if points < 1 or start <= 0.0 or stop < start:
        raise ValueError(f"Sweep {text!r} needs 0 < start <= stop and N >= 1.")
    if parts[2].startswith("log"):
        return np.logspace(np.log10(start), np.log10(stop), points)
    return np.linspace(start, stop, points)


def _as_rates(value) -> Dict[str, float]:
    if isinstance(value, Mapping):
        return {str(k): float(v) for k, v in value.items()}
    return parse_assignments(value, "traffic override")


def parse_metrics(text) -> Tuple[str, ...]:
    """Metric names from a comma separated list or a sequence."""
    if isinstance(text, str):
        text = [name for name in text.split(",") if name.strip()]
    return tuple(MetricKind.from_string(name).tag for name in text)


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """
    Settings of one command line experiment.

    The JSON form uses the same field names; ``mac``, ``timing`` and ``profile`` are
    objects with the fields of :class:`~macaware.mac.MacParams`,
    :class:`~macaware.mac.Timing` and :class:`~macaware.mac.PowerProfile`.

    Parameters
    ----------
    topology :
        Path of a topology file or name of a packaged fixture.
    metric :
        Routing metric name, e.g. ``"r"``, ``"q"``, ``"etx"`` or ``"backpressure"``.
    rmin :
        Reliability floor of the Q-metric.
    bp_weight :
        Link cost weight of back-pressure.
    mac, timing, profile :
        MAC parameters, radio timing and power profile.
    traffic :
        Per-node generation rates overriding the topology, e.g. ``{"V2": 20.0}``.
    lambda_all :
        Generation rate applied to every non-root node before ``traffic``.
    mode :
        Subcommand.
    seed :
        Seed of the simulation streams and of generated topologies.
    out :
        Output path; standard output if not given.
    trace :
        Path of the JSON-lines trace of the first replication.
    duration, warmup, arrival, replications :
        Simulation settings.
    lambda_sweep :
        Rate sweep ``start:stop:logN|linN`` applied to every non-root node.
    rmin_grid, dmax_grid :
        Constraint grid of ``select``.
    m0_range, mb_range, m_range :
        Search space of ``select``.
    metrics :
        Metrics compared by ``compare`` and searched by ``select``.
    compare_mode :
        ``"solve"``, ``"simulate"`` or ``"both"``.
    validate_sim :
        Whether ``select`` re-checks chosen cells by simulation.
    n_nodes, density :
        Settings of ``gen-topology``.
    maxiter :
        Iteration limit of the fixed-point solver.
    """

    topology: Optional[str] = None
    metric: str = "r"
    rmin: float = 0.9
    bp_weight: float = 1.0
    mac: MacParams = MacParams()
    timing: Timing = Timing()
    profile: PowerProfile = PowerProfile()
    traffic: Mapping[NodeIdType, float] = dataclasses.field(default_factory=dict)
    lambda_all: Optional[float] = None
    mode: str = "solve"
    seed: int = 0
    out: Optional[str] = None
    trace: Optional[str] = None
    duration: float = 100.0
    warmup: float = 0.0
    arrival: str = "periodic-jitter"
    replications: int = 1
    lambda_sweep: Optional[str] = None
    rmin_grid: Tuple[float, ...] = (0.0,)
    dmax_grid: Tuple[float, ...] = (math.inf,)
    m0_range: Tuple[int, ...] = tuple(range(3, 9))
    mb_range: Tuple[int, ...] = tuple(range(3, 9))
    m_range: Tuple[int, ...] = tuple(range(0, 5))
    metrics: Tuple[str, ...] = ("R_METRIC", "Q_METRIC")
    compare_mode: str = "solve"
    validate_sim: bool = False
    n_nodes: int = 19
    density: float = 2.0
    maxiter: int = 500

    def __post_init__(self):
        if self.compare_mode not in ("solve", "simulate", "both"):
            raise ValueError(
                f"compare_mode must be solve, simulate or both, "
                f"got {self.compare_mode!r}."
            )
        if self.replications < 1:
            raise ValueError(
                f"replications must be positive, got {self.replications}."
            )

    @classmethod
    def from_json(cls, document: DocumentArgType) -> "ExperimentConfig":
        """
        Read a configuration from a JSON path, JSON text or mapping.

        Raises
        ------
        ValueError
            If the document names an unknown field.
        FileNotFoundError
            If the path does not exist.
        """
        if isinstance(document, Mapping):
            data = dict(document)
        elif isinstance(document, str) and document.lstrip().startswith("{"):
            data = json.loads(document)
        else:
            with open(os.fspath(document), encoding="utf-8") as file:
                data = json.load(file)
        return cls().merged_with(data)

    def merged_with(self, overrides) -> "ExperimentConfig":
        """
        Copy with fields replaced by ``overrides``.

        ``overrides`` is a mapping or an :class:`argparse.Namespace`; entries that are
        ``None`` keep the current value. Nested records accept partial mappings, and
        traffic overrides are merged into the current ones.
        """
        if isinstance(overrides, argparse.Namespace):
            overrides = vars(overrides)
        names = {field.name for field in dataclasses.fields(self)}
        changes: Dict[str, Any] = {}
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in names:
                raise ValueError(f"Unknown configuration field {key!r}.")
            if key in _NESTED and isinstance(value, Mapping):
                value = dataclasses.replace(getattr(self, key), **value)
            elif key == "traffic":
                value = {**self.traffic, **_as_rates(value)}
            elif key in ("rmin_grid", "dmax_grid") and isinstance(value, str):
                value = parse_grid(value)
            elif key in ("rmin_grid", "dmax_grid"):
                value = tuple(float(v) for v in value)
            elif key in ("m0_range", "mb_range", "m_range"):
                value = tuple(int(v) for v in value)
            elif key == "metrics":
                value = parse_metrics(value)
            changes[key] = value
        return dataclasses.replace(self, **changes)

    @property
    def metric_kind(self) -> MetricKind:
        return MetricKind.from_string(
            self.metric, rmin=self.rmin, bp_weight=self.bp_weight
        )

    def load_topology(self) -> Topology:
        """
        Topology with the configured traffic.

        Raises
        ------
        ValueError
            If no topology is configured or a traffic override names an unknown node.
        FileNotFoundError
            If the topology is neither a file nor a packaged fixture.
        """
        if self.topology is None:
            raise ValueError("topology is required (--topology PATH or fixture name).")
        if os.path.exists(self.topology):
            topo = load_topology(self.topology)
        elif self.topology in FIXTURES:
            topo = load_fixture(self.topology)
        else:
            raise FileNotFoundError(f"topology file {self.topology!r} does not exist.")
        if self.traffic or self.lambda_all is not None:
            topo = topo.with_traffic(self.traffic, default=self.lambda_all)
        return topo

    def sim_config(self, **changes) -> SimConfig:
        config = SimConfig(
            duration=self.duration,
            seed=self.seed,
            mac=self.mac,
            timing=self.timing,
            profile=self.profile,
            metric=self.metric_kind,
            arrival=self.arrival,
            warmup=self.warmup,
        )
        return config.replace(**changes) if changes else config