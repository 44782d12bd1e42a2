"""Problem data for the cycle-star hub network design problem.

Hubs sit on an undirected cycle; every non-hub is allocated to exactly one
hub and flow from ``p`` to ``q`` is routed ``p -> a(p) -> ... -> a(q) -> q``
along the shorter arc of the cycle.

Indexing is 0-based throughout the Python API.  Edge ``l`` joins hubs ``l``
and ``(l + 1) % h``.  The CLI and the instance file format report hubs
1-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Union

import numpy as np

PathLike = Union[str, Path]


class InstanceFormatError(ValueError):
    """Raised when an instance file cannot be parsed."""


class InstanceValidationError(ValueError):
    """Raised when parsed instance data violates the model invariants."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("invalid instance: " + "; ".join(self.problems))


@dataclass(frozen=True, eq=False)
class HubCycle:
    edge_lengths: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "edge_lengths", np.asarray(self.edge_lengths, dtype=float).ravel())

    @property
    def h(self) -> int:
        return int(self.edge_lengths.size)

    @property
    def total_length(self) -> float:
        return float(np.sum(self.edge_lengths))

    def __eq__(self, other):
        if not isinstance(other, HubCycle):
            return NotImplemented
        return np.array_equal(self.edge_lengths, other.edge_lengths)


@dataclass(frozen=True, eq=False)
class Instance:
    """Hub cycle, spoke costs ``c[p, i]`` (n x h) and flows ``w[p, q]`` (n x n)."""

    cycle: HubCycle
    spoke_costs: np.ndarray
    flows: np.ndarray

    def __post_init__(self):
        if not isinstance(self.cycle, HubCycle):
            object.__setattr__(self, "cycle", HubCycle(self.cycle))
        object.__setattr__(self, "spoke_costs", np.atleast_2d(np.asarray(self.spoke_costs, dtype=float)))
        object.__setattr__(self, "flows", np.atleast_2d(np.asarray(self.flows, dtype=float)))

    @property
    def h(self) -> int:
        return self.cycle.h

    @property
    def n(self) -> int:
        return int(self.spoke_costs.shape[0])

    def metric(self) -> np.ndarray:
        return build_cycle_metric(self.cycle)

    def scaled_costs(self, factor: float) -> "Instance":
        """Copy with edge lengths and spoke costs multiplied by ``factor``."""
        return Instance(HubCycle(self.cycle.edge_lengths * factor), self.spoke_costs * factor, self.flows.copy())

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.cycle == other.cycle
            and np.array_equal(self.spoke_costs, other.spoke_costs)
            and np.array_equal(self.flows, other.flows)
        )


def build_cycle_metric(cycle: HubCycle) -> np.ndarray:
    """Hub-to-hub distances: the shorter of the two arcs between each pair."""
    h = cycle.h
    # position of hub i walking clockwise from hub 0
    pos = np.concatenate(([0.0], np.cumsum(cycle.edge_lengths)[:-1]))
    cw = np.abs(pos[:, None] - pos[None, :])
    C = np.minimum(cw, cycle.total_length - cw)
    C[np.arange(h), np.arange(h)] = 0.0
    return C


def clockwise_edges(h: int, i: int, j: int) -> List[int]:
    """Edges traversed walking from ``i`` up to ``j`` (indices mod h)."""
    edges = []
    k = i
    while k != j:
        edges.append(k)
        k = (k + 1) % h
    return edges


def shortest_path_edges(cycle: HubCycle, i: int, j: int) -> set:
    """Edge set of a shortest i-j arc; an exact tie resolves to the clockwise arc."""
    if i == j:
        return set()
    h = cycle.h
    cw = clockwise_edges(h, i, j)
    cw_len = float(np.sum(cycle.edge_lengths[cw]))
    if cw_len <= cycle.total_length - cw_len:
        return set(cw)
    return set(range(h)) - set(cw)


def evaluate_assignment(instance: Instance, assignment: Sequence[int], metric: np.ndarray = None) -> float:
    """Total routed cost of an integral allocation ``assignment[p] = hub``."""
    a = np.asarray(assignment, dtype=int)
    C = instance.metric() if metric is None else metric
    W = instance.flows.copy()
    np.fill_diagonal(W, 0.0)
    spoke = instance.spoke_costs[np.arange(instance.n), a]
    out_w = W.sum(axis=1)
    in_w = W.sum(axis=0)
    return float(spoke @ (out_w + in_w) + np.sum(W * C[np.ix_(a, a)]))


def validate_instance(instance: Instance) -> List[str]:
    """Return a list of violated invariants; empty iff the instance is valid."""
    problems = []
    lengths = instance.cycle.edge_lengths
    if instance.h < 3:
        problems.append(f"h >= 3 required (got h={instance.h})")
    if not np.all(np.isfinite(lengths)):
        problems.append("non-finite edge length")
    elif np.any(lengths < 0):
        problems.append("negative edge length")
    S, W = instance.spoke_costs, instance.flows
    if S.ndim != 2 or S.shape[1] != instance.h:
        problems.append(f"spoke_costs must be n x h, got shape {S.shape}")
    if W.ndim != 2 or W.shape != (S.shape[0], S.shape[0]):
        problems.append(f"flows must be n x n with n={S.shape[0]}, got shape {W.shape}")
    if S.shape[0] < 1:
        problems.append("n >= 1 required")
    if not np.all(np.isfinite(S)):
        problems.append("non-finite spoke cost")
    elif np.any(S < 0):
        problems.append("negative spoke cost")
    if not np.all(np.isfinite(W)):
        problems.append("non-finite flow")
    elif np.any(W < 0):
        problems.append("negative flow")
    if W.ndim == 2 and W.shape[0] == W.shape[1] and np.any(np.diag(W) != 0):
        problems.append("nonzero flow diagonal")
    return problems


def generate_instance(h: int, n: int, mode: str = "general", seed: int = 0) -> Instance:
    """Random instance with entries uniform on [0, 1].

    In ``assumption1`` mode each non-hub gets an anchor hub ``a_p`` and spoke
    costs ``c[p, i] = C[a_p, i] + r_p``, so ``C[i, j] <= c[p, i] + c[p, j]``
    holds by the triangle inequality of the cycle metric.
    """
    if h < 3:
        raise ValueError(f"h >= 3 required (got {h})")
    if n < 1:
        raise ValueError(f"n >= 1 required (got {n})")
    if mode not in ("general", "assumption1"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    cycle = HubCycle(rng.random(h))
    if mode == "general":
        spokes = rng.random((n, h))
    else:
        C = build_cycle_metric(cycle)
        anchors = rng.integers(0, h, size=n)
        spokes = C[anchors] + rng.random(n)[:, None]
    flows = rng.random((n, n))
    np.fill_diagonal(flows, 0.0)
    return Instance(cycle, spokes, flows)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _fmt_row(row) -> str:
    return "[" + ", ".join(_fmt(v) for v in row) + "]"


def instance_to_json(instance: Instance) -> str:
    lines = [
        "{",
        f'  "h": {instance.h},',
        f'  "edge_lengths": {_fmt_row(instance.cycle.edge_lengths)},',
        f'  "n": {instance.n},',
        '  "spoke_costs": [',
        ",\n".join("    " + _fmt_row(r) for r in instance.spoke_costs),
        "  ],",
        '  "flows": [',
        ",\n".join("    " + _fmt_row(r) for r in instance.flows),
        "  ]",
        "}",
    ]
    return "\n".join(lines) + "\n"


def write_instance(instance: Instance, path: PathLike) -> None:
    Path(path).write_text(instance_to_json(instance), encoding="utf-8")


def _matrix_field(doc: dict, name: str, rows: int, cols: int) -> np.ndarray:
    value = doc[name]
    if not isinstance(value, list) or any(not isinstance(r, list) for r in value):
        raise InstanceFormatError(f"field {name!r}: expected an array of arrays")
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(f"field {name!r}: {exc}") from None
    if arr.ndim != 2 or arr.shape != (rows, cols):
        raise InstanceValidationError([f"{name} must be {rows} x {cols}, got shape {arr.shape}"])
    return arr


def instance_from_json(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InstanceFormatError("top level must be a JSON object")
    for name in ("h", "edge_lengths", "n", "spoke_costs", "flows"):
        if name not in doc:
            raise InstanceFormatError(f"missing field {name!r}")
    h, n = doc["h"], doc["n"]
    if not isinstance(h, int) or isinstance(h, bool):
        raise InstanceFormatError("field 'h': expected an integer")
    if not isinstance(n, int) or isinstance(n, bool):
        raise InstanceFormatError("field 'n': expected an integer")
    if h < 3:
        raise InstanceValidationError([f"h >= 3 required (got h={h})"])
    if n < 1:
        raise InstanceValidationError([f"n >= 1 required (got n={n})"])
    try:
        lengths = np.array(doc["edge_lengths"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(f"field 'edge_lengths': {exc}") from None
    if lengths.shape != (h,):
        raise InstanceValidationError([f"edge_lengths must have h={h} entries, got shape {lengths.shape}"])
    inst = Instance(
        HubCycle(lengths),
        _matrix_field(doc, "spoke_costs", n, h),
        _matrix_field(doc, "flows", n, n),
    )
    problems = validate_instance(inst)
    if problems:
        raise InstanceValidationError(problems)
    return inst


def read_instance(path: PathLike) -> Instance:
    return instance_from_json(Path(path).read_text(encoding="utf-8"))
