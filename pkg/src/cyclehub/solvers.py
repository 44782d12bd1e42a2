"""End-to-end solvers and the exhaustive reference.

``algorithm4`` solves the relaxation once, rounds its x-part dependently in
each of the ``h`` path orders and keeps the cheapest result.  ``combined``
additionally derandomises independent rounding and keeps the better of the
two.  ``exact_bruteforce`` enumerates all ``h**n`` allocations.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .instance import Instance, evaluate_assignment
from .lrp import LpSolution, solve_lrp
from .rounding import (
    best_sweep_outcome,
    dependent_rounding,
    derandomize_independent,
    pi_orders,
)

DEFAULT_BUDGET = 10**7
RATIO_TOL = 1e-6
_CHUNK = 1 << 16


class BudgetExceeded(RuntimeError):
    pass


def cycle_guarantee(h: int) -> float:
    return 2.0 * (1.0 - 1.0 / h)


def combined_guarantee(h: int) -> float:
    return 1.5 - 1.0 / (2.0 * (h - 1))


def ratio(cost: float, reference: float) -> float:
    """``cost / reference`` with 0/0 read as 1."""
    if reference > 0:
        return cost / reference
    return 1.0 if abs(cost) <= 1e-9 else float("inf")


@dataclass
class SolveReport:
    assignment: Optional[np.ndarray]
    cost: Optional[float]
    lp_value: Optional[float]
    w1: Optional[float]
    w2: Optional[float]
    guarantee: Optional[float]
    method: str
    seed: Optional[int] = None
    exact_cost: Optional[float] = None
    wall_time: float = 0.0

    @property
    def ratio_vs_lp(self) -> Optional[float]:
        if self.cost is None or self.lp_value is None:
            return None
        return ratio(self.cost, self.lp_value)

    @property
    def ratio_vs_exact(self) -> Optional[float]:
        if self.exact_cost is None:
            return None
        numerator = self.cost if self.cost is not None else self.lp_value
        return ratio(numerator, self.exact_cost)

    @property
    def within_guarantee(self) -> Optional[bool]:
        r = self.ratio_vs_exact
        if r is None:
            return None
        if self.guarantee is None:
            return True
        return bool(r <= self.guarantee + RATIO_TOL)


def _assignment_costs(instance: Instance, A: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Costs of a batch of assignments, one per row of ``A``."""
    W = instance.flows.copy()
    np.fill_diagonal(W, 0.0)
    through = W.sum(axis=1) + W.sum(axis=0)
    weighted = instance.spoke_costs * through[:, None]
    n = instance.n
    cost = weighted[np.arange(n), A].sum(axis=1)
    for p in range(n):
        for q in range(n):
            if W[p, q] != 0.0:
                cost += W[p, q] * C[A[:, p], A[:, q]]
    return cost


def exact_bruteforce(instance: Instance, budget: int = DEFAULT_BUDGET) -> Tuple[np.ndarray, float]:
    """Optimal allocation by enumeration; ties go to the lexicographically smallest."""
    n, h = instance.n, instance.h
    total = h**n
    if total > budget:
        raise BudgetExceeded(f"{h}^{n} = {total} assignments exceeds budget {budget}")
    C = instance.metric()
    best_a, best_cost = None, np.inf
    it = itertools.product(range(h), repeat=n)
    while True:
        block = np.array(list(itertools.islice(it, _CHUNK)), dtype=np.int64)
        if block.size == 0:
            break
        block = block.reshape(-1, n)
        costs = _assignment_costs(instance, block, C)
        low = costs.min()
        k = int(np.flatnonzero(costs <= low + 1e-12 * max(1.0, abs(low)))[0])
        # strict improvement keeps the earliest (lexicographically smallest) optimum
        if best_a is None or costs[k] < best_cost - 1e-12 * max(1.0, abs(best_cost)):
            best_a, best_cost = block[k].copy(), float(costs[k])
    # recompute on the canonical path so callers see the same number as evaluate_assignment
    return best_a, evaluate_assignment(instance, best_a, C)


def _lexmin_key(cost: float, assignment) -> tuple:
    return (cost, tuple(int(v) for v in assignment))


def algorithm4(
    instance: Instance,
    mode: str = "derandomized",
    seed: Optional[int] = None,
    lp: Optional[LpSolution] = None,
) -> SolveReport:
    """Relaxation plus dependent rounding in every path order; best candidate wins.

    ``mode="derandomized"`` evaluates every segment outcome of every order.
    ``mode="randomized"`` draws one threshold per order from ``seed``.
    """
    if mode not in ("derandomized", "randomized"):
        raise ValueError(f"unknown mode {mode!r}")
    t0 = time.perf_counter()
    lp = solve_lrp(instance) if lp is None else lp
    C = instance.metric()
    x = lp.x
    best = None
    if mode == "derandomized":
        for order in pi_orders(instance.h):
            outcome, cost = best_sweep_outcome(instance, x, order, C)
            key = _lexmin_key(cost, outcome.assignment)
            if best is None or key < best[0]:
                best = (key, outcome.assignment)
    else:
        rng = np.random.default_rng(seed)
        for order in pi_orders(instance.h):
            outcome = dependent_rounding(x, order, float(rng.random()))
            cost = evaluate_assignment(instance, outcome.assignment, C)
            key = _lexmin_key(cost, outcome.assignment)
            if best is None or key < best[0]:
                best = (key, outcome.assignment)
    (cost, _), assignment = best
    return SolveReport(
        assignment=np.asarray(assignment),
        cost=cost,
        lp_value=lp.value,
        w1=lp.split.w1,
        w2=lp.split.w2,
        guarantee=cycle_guarantee(instance.h),
        method="algorithm4" if mode == "derandomized" else "algorithm4-randomized",
        seed=seed,
        wall_time=time.perf_counter() - t0,
    )


def independent(instance: Instance, lp: Optional[LpSolution] = None) -> SolveReport:
    """Derandomised independent rounding of the relaxation.

    Its factor-2 bound needs the spoke triangle condition; without it no
    guarantee is claimed.
    """
    t0 = time.perf_counter()
    lp = solve_lrp(instance) if lp is None else lp
    a = derandomize_independent(instance, lp.x)
    return SolveReport(
        assignment=a,
        cost=evaluate_assignment(instance, a),
        lp_value=lp.value,
        w1=lp.split.w1,
        w2=lp.split.w2,
        guarantee=2.0 if check_assumption1(instance) else None,
        method="independent",
        wall_time=time.perf_counter() - t0,
    )


def combined(instance: Instance, lp: Optional[LpSolution] = None) -> SolveReport:
    t0 = time.perf_counter()
    lp = solve_lrp(instance) if lp is None else lp
    dep = algorithm4(instance, lp=lp)
    ind = independent(instance, lp=lp)
    pick = min((dep, ind), key=lambda r: _lexmin_key(r.cost, r.assignment))
    guarantee = combined_guarantee(instance.h) if check_assumption1(instance) else cycle_guarantee(instance.h)
    return SolveReport(
        assignment=pick.assignment,
        cost=pick.cost,
        lp_value=lp.value,
        w1=lp.split.w1,
        w2=lp.split.w2,
        guarantee=guarantee,
        method="combined",
        wall_time=time.perf_counter() - t0,
    )


def check_assumption1(instance: Instance, tol: float = 1e-12) -> bool:
    """True iff ``C[i, j] <= c[p, i] + c[p, j]`` for every hub pair and non-hub."""
    C = instance.metric()
    S = instance.spoke_costs
    return bool(np.all(C[None, :, :] <= S[:, :, None] + S[:, None, :] + tol))
