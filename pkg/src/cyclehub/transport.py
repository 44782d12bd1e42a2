"""Hitchcock transportation subproblems.

The north-west corner rule builds the staircase coupling of two marginals;
under a cost matrix that is Monge in the processing order it is optimal.
``solve_htp_exact`` solves the same problem with the certified simplex and
serves as the independent reference.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .simplex import simplex

BALANCE_TOL = 1e-12


@dataclass
class TransportPlan:
    flow: np.ndarray
    row_marginals: np.ndarray
    column_marginals: np.ndarray


def _balanced(a, b) -> Tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    if a.ndim != 1 or b.ndim != 1 or a.size == 0 or b.size == 0:
        raise ValueError("marginals must be non-empty vectors")
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError("marginals must be non-negative")
    sa, sb = a.sum(), b.sum()
    if abs(sa - sb) > BALANCE_TOL * max(1.0, sa, sb):
        raise ValueError(f"unbalanced marginals: {sa!r} != {sb!r}")
    b[-1] = max(0.0, b[-1] + (sa - sb))
    return a, b


def northwest_corner(a, b) -> TransportPlan:
    a, b = _balanced(a, b)
    I, J = a.size, b.size
    Y = np.zeros((I, J))
    ra, rb = a.copy(), b.copy()
    i = j = 0
    while True:
        amount = min(ra[i], rb[j])
        Y[i, j] = amount
        ra[i] -= amount
        rb[j] -= amount
        if i == I - 1 and j == J - 1:
            break
        # column checked first, so a simultaneous tie advances the column
        column_full = rb[j] == 0.0
        if (column_full and j < J - 1) or i == I - 1:
            j += 1
        else:
            i += 1
    return TransportPlan(Y, a, b)


def staircase_from_prefix_mins(a, b) -> np.ndarray:
    """The unique Y with prefix block sums ``min(A_i', B_j')``, by 2-D differencing."""
    a, b = _balanced(a, b)
    P = np.minimum.outer(np.cumsum(a), np.cumsum(b))
    P = np.pad(P, ((1, 0), (1, 0)))
    return P[1:, 1:] - P[:-1, 1:] - P[1:, :-1] + P[:-1, :-1]


def nwcr_joint(x_p, x_q, order: Sequence[int]) -> np.ndarray:
    """North-west corner coupling of two hub distributions in the given hub order.

    Entry ``[i, j]`` is the mass on (p at hub i, q at hub j), in hub indexing.
    """
    x_p = np.asarray(x_p, dtype=float)
    x_q = np.asarray(x_q, dtype=float)
    for name, row in (("x_p", x_p), ("x_q", x_q)):
        if abs(row.sum() - 1.0) > 1e-9:
            raise ValueError(f"{name} must sum to 1 (got {row.sum()!r})")
    order = np.asarray(order, dtype=int)
    plan = northwest_corner(x_p[order], x_q[order])
    Y = np.zeros((order.size, order.size))
    Y[np.ix_(order, order)] = plan.flow
    return Y


def plan_cost(plan, cost) -> float:
    flow = plan.flow if isinstance(plan, TransportPlan) else np.asarray(plan, dtype=float)
    cost = np.asarray(cost, dtype=float)
    if flow.shape != cost.shape:
        raise ValueError(f"plan shape {flow.shape} does not match cost shape {cost.shape}")
    return float(np.sum(flow * cost))


def solve_htp_exact(a, b, cost) -> Tuple[TransportPlan, float]:
    a, b = _balanced(a, b)
    cost = np.asarray(cost, dtype=float)
    I, J = a.size, b.size
    if cost.shape != (I, J):
        raise ValueError(f"cost must be {I} x {J}, got {cost.shape}")
    A = np.zeros((I + J, I * J))
    for i in range(I):
        A[i, i * J:(i + 1) * J] = 1.0
    for j in range(J):
        A[I + j, j::J] = 1.0
    res = simplex(cost.ravel(), A, np.concatenate((a, b)))
    return TransportPlan(res.x.reshape(I, J), a, b), res.value
