"""Path metrics of the cycle and their convex combination.

Deleting edge ``l`` from the hub cycle leaves a path; its distance matrix
becomes Monge once hubs are listed in path order ``l+1, ..., h-1, 0, ..., l``.
A convex combination of these ``h`` path metrics sandwiches the cycle metric
between ``C`` and ``2 (1 - 1/h) C``.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np

from .instance import HubCycle, build_cycle_metric

DEFAULT_TOL = 1e-9


def monge_order(h: int, edge: int) -> List[int]:
    """Hubs in the order they appear along the path left by deleting ``edge``."""
    if not 0 <= edge < h:
        raise ValueError(f"edge index {edge} out of range for h={h}")
    return [(edge + 1 + k) % h for k in range(h)]


def path_metric(cycle: HubCycle, edge: int) -> np.ndarray:
    """Distances along the cycle with ``edge`` removed."""
    h = cycle.h
    order = monge_order(h, edge)
    # edges walked along the path: order[k] -> order[k+1] is edge order[k]
    steps = cycle.edge_lengths[order[:-1]]
    pos = np.empty(h)
    pos[order] = np.concatenate(([0.0], np.cumsum(steps)))
    return np.abs(pos[:, None] - pos[None, :])


def monge_violation(matrix: np.ndarray, order: Sequence[int] = None) -> Tuple[float, tuple]:
    """Largest ``M[i,j] + M[i',j'] - M[i,j'] - M[i',j]`` over i<i', j<j'.

    ``M`` is ``matrix`` with rows and columns permuted by ``order``.  Returns
    the excess and the offending quadruple ``(i, i', j, j')`` in positions of
    the permuted matrix (``None`` when the matrix has fewer than 2 rows or
    columns).
    """
    M = np.asarray(matrix, dtype=float)
    if order is not None:
        M = M[np.ix_(order, order)]
    m, k = M.shape
    if m < 2 or k < 2:
        return 0.0, None
    # D[i, i', j, j']
    D = M[:, None, :, None] + M[None, :, None, :] - M[:, None, None, :] - M[None, :, :, None]
    ri = np.arange(m)
    ci = np.arange(k)
    mask = (ri[:, None] < ri[None, :])[:, :, None, None] & (ci[:, None] < ci[None, :])[None, None, :, :]
    D = np.where(mask, D, -np.inf)
    flat = int(np.argmax(D))
    return float(D.flat[flat]), tuple(int(v) for v in np.unravel_index(flat, D.shape))


def is_monge(matrix: np.ndarray, order: Sequence[int] = None, tol: float = DEFAULT_TOL) -> bool:
    excess, _ = monge_violation(matrix, order)
    return excess <= tol


def theta_coefficients(cycle: HubCycle) -> np.ndarray:
    """Weights on the path metrics; ``theta[e] >= 0`` and they sum to 1.

    When some edge is at least half the cycle length every shortest path
    avoids it and all weight goes to that edge (lowest index on ties).  A
    zero-length cycle gets uniform weights.
    """
    c = cycle.edge_lengths
    h = cycle.h
    L = float(np.sum(c))
    if L == 0.0:
        return np.full(h, 1.0 / h)
    long_edges = np.flatnonzero(2.0 * c >= L)
    if long_edges.size:
        theta = np.zeros(h)
        theta[long_edges[0]] = 1.0
        return theta
    # theta is scale invariant; normalise to keep the (h-1)-fold product in range
    z = c / L
    slack = 1.0 - 2.0 * z
    theta = np.array([z[e] * np.prod(np.delete(slack, e)) for e in range(h)])
    return theta / theta.sum()


def combined_path_metric(cycle: HubCycle, theta: np.ndarray) -> np.ndarray:
    return sum(theta[e] * path_metric(cycle, e) for e in range(cycle.h))


def verify_sandwich(cycle: HubCycle, theta: np.ndarray) -> Tuple[float, float]:
    """Check ``C <= sum_e theta_e C^e <= 2(1 - 1/h) C``.

    Returns ``(lower_violation, upper_ratio)``: how far the combination dips
    below ``C`` anywhere (0 if never), and the largest entrywise ratio of the
    combination to ``C`` over pairs with positive distance (1.0 if none).
    """
    C = build_cycle_metric(cycle)
    M = combined_path_metric(cycle, theta)
    lower = max(0.0, float(np.max(C - M)))
    pos = C > 0
    upper = float(np.max(M[pos] / C[pos])) if np.any(pos) else 1.0
    return lower, upper
