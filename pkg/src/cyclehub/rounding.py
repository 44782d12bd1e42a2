"""Rounding fractional allocations to integral ones.

Dependent rounding stacks each row of ``x`` in a fixed hub order and cuts
every stack with the same threshold ``u``, so the joint law of any two
non-hubs is the north-west corner coupling of their rows.  The outcome is
piecewise constant in ``u``; ``breakpoints`` lists the jumps so every
possible outcome can be enumerated.

Independent rounding draws each row separately; ``derandomize_independent``
fixes it by conditional expectations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .instance import Instance, evaluate_assignment
from .monge import monge_order

ROW_SUM_TOL = 1e-9
BREAKPOINT_TOL = 1e-12


@dataclass
class RoundingOutcome:
    assignment: np.ndarray
    u: float
    order: List[int]


def pi_orders(h: int) -> List[List[int]]:
    """One hub order per cycle edge, the path order left by deleting it."""
    return [monge_order(h, e) for e in range(h)]


def _check_stochastic(x: np.ndarray) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if np.any(x < -ROW_SUM_TOL):
        raise ValueError("x has negative entries")
    dev = np.abs(x.sum(axis=1) - 1.0)
    if np.any(dev > ROW_SUM_TOL):
        raise ValueError(f"rows of x must sum to 1 (worst deviation {dev.max():.3g})")
    return np.maximum(x, 0.0)


def prefix_sums(x: np.ndarray, order: Sequence[int]) -> np.ndarray:
    """Row-wise cumulative sums of ``x`` in ``order``; last column pinned to 1."""
    x = _check_stochastic(x)
    cols = x[:, list(order)]
    P = np.cumsum(cols, axis=1)
    P = np.minimum(P / P[:, -1:], 1.0)
    P[:, -1] = 1.0
    return P


def dependent_rounding(x, order: Sequence[int], u: float) -> RoundingOutcome:
    if not 0.0 <= u < 1.0:
        raise ValueError(f"u must lie in [0, 1), got {u!r}")
    P = prefix_sums(x, order)
    pos = np.argmax(u < P, axis=1)
    return RoundingOutcome(np.asarray(order)[pos], float(u), list(order))


def dependent_rounding_seeded(x, order: Sequence[int], seed) -> RoundingOutcome:
    return dependent_rounding(x, order, float(np.random.default_rng(seed).random()))


def breakpoints(x, order: Sequence[int]) -> List[float]:
    P = prefix_sums(x, order)
    vals = np.sort(P[:, :-1].ravel())
    vals = vals[(vals > BREAKPOINT_TOL) & (vals < 1.0 - BREAKPOINT_TOL)]
    out: List[float] = []
    for v in vals:
        if not out or v - out[-1] > BREAKPOINT_TOL:
            out.append(float(v))
    return out


def segments(x, order: Sequence[int]):
    """``(lo, hi)`` intervals of [0, 1) on which the rounding outcome is constant."""
    cuts = [0.0] + breakpoints(x, order) + [1.0]
    return list(zip(cuts[:-1], cuts[1:]))


def sweep_outcomes(x, order: Sequence[int]) -> List[RoundingOutcome]:
    """Every distinct dependent-rounding outcome, one per segment midpoint."""
    return [dependent_rounding(x, order, 0.5 * (lo + hi)) for lo, hi in segments(x, order)]


def joint_measure(x_p, x_q, order: Sequence[int]) -> np.ndarray:
    """``Pr[p -> i and q -> j]`` under one shared uniform threshold.

    Computed directly as the overlap of the two hub intervals on [0, 1).
    """
    P = prefix_sums(np.vstack([x_p, x_q]), order)
    lo = np.hstack([[[0.0], [0.0]], P[:, :-1]])
    order = np.asarray(order)
    overlap = np.minimum(P[0][:, None], P[1][None, :]) - np.maximum(lo[0][:, None], lo[1][None, :])
    h = order.size
    out = np.zeros((h, h))
    out[np.ix_(order, order)] = np.maximum(overlap, 0.0)
    return out


def independent_rounding(x, seed) -> np.ndarray:
    x = _check_stochastic(x)
    rng = np.random.default_rng(seed)
    P = np.cumsum(x, axis=1)
    P[:, -1] = np.inf
    u = rng.random(x.shape[0])
    return np.argmax(u[:, None] < P, axis=1)


def expected_independent_cost(instance: Instance, x, metric: np.ndarray = None) -> float:
    """Expected cost when each non-hub is drawn independently from its row of ``x``."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    C = instance.metric() if metric is None else metric
    W = instance.flows.copy()
    np.fill_diagonal(W, 0.0)
    spoke = np.sum(instance.spoke_costs * x, axis=1)
    hub = x @ C @ x.T
    return float(spoke @ (W.sum(axis=1) + W.sum(axis=0)) + np.sum(W * hub))


def derandomize_independent(instance: Instance, x) -> np.ndarray:
    """Fix non-hubs one at a time to the hub of least conditional expected cost.

    Each step cannot raise the conditional expectation, so the result costs
    at most ``expected_independent_cost(instance, x)``.
    """
    x = _check_stochastic(x).copy()
    C = instance.metric()
    for p in range(instance.n):
        best, best_cost = 0, np.inf
        # choosing inside the row's support keeps an integral row unchanged
        for i in np.flatnonzero(x[p] > 0):
            x[p] = 0.0
            x[p, i] = 1.0
            cost = expected_independent_cost(instance, x, C)
            if cost < best_cost:
                best, best_cost = i, cost
        x[p] = 0.0
        x[p, best] = 1.0
    return np.argmax(x, axis=1)


def best_sweep_outcome(instance: Instance, x, order: Sequence[int], metric: np.ndarray = None):
    """Cheapest outcome over all segments, with its cost."""
    C = instance.metric() if metric is None else metric
    best, best_cost = None, np.inf
    for outcome in sweep_outcomes(x, order):
        cost = evaluate_assignment(instance, outcome.assignment, C)
        if cost < best_cost:
            best, best_cost = outcome, cost
    return best, best_cost
