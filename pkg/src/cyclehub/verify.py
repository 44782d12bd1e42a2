"""Randomised batch checks of the structural facts the rounding relies on.

Each suite draws its own cases from a seeded generator and returns a
``SuiteResult``.  ``inject_fault`` deliberately corrupts the object under
test so the harness itself can be shown to detect failures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from .instance import HubCycle
from .monge import is_monge, monge_order, path_metric, theta_coefficients, verify_sandwich
from .rounding import joint_measure
from .transport import nwcr_joint, plan_cost, solve_htp_exact

SANDWICH_TOL = 1e-9
HTP_TOL = 1e-9
JOINT_TOL = 1e-12


@dataclass
class SuiteResult:
    name: str
    passed: int
    failed: int

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.passed}/{self.passed + self.failed} cases"


def random_cycle(rng: np.random.Generator, h_min: int, h_max: int) -> HubCycle:
    return HubCycle(rng.random(int(rng.integers(h_min, h_max + 1))))


def random_distribution(rng: np.random.Generator, h: int) -> np.ndarray:
    # sparse supports exercise degenerate staircases
    x = rng.random(h) * (rng.random(h) < 0.7)
    if x.sum() == 0:
        x[rng.integers(h)] = 1.0
    return x / x.sum()


def _order(h: int, edge: int, fault: bool) -> List[int]:
    order = monge_order(h, edge)
    if fault:
        order[0], order[h // 2] = order[h // 2], order[0]
    return order


def monge_suite(rng, h_min, h_max, trials, inject_fault=False) -> SuiteResult:
    passed = failed = 0
    for _ in range(trials):
        cycle = random_cycle(rng, h_min, h_max)
        ok = all(is_monge(path_metric(cycle, e), _order(cycle.h, e, inject_fault)) for e in range(cycle.h))
        passed += ok
        failed += not ok
    return SuiteResult("path metrics are Monge in path order", passed, failed)


def sandwich_suite(rng, h_min, h_max, trials, inject_fault=False) -> SuiteResult:
    passed = failed = 0
    for _ in range(trials):
        cycle = random_cycle(rng, h_min, h_max)
        theta = theta_coefficients(cycle)
        if inject_fault:
            theta = np.zeros(cycle.h)
            theta[int(np.argmin(cycle.edge_lengths))] = 1.0
        lower, upper = verify_sandwich(cycle, theta)
        ok = lower <= SANDWICH_TOL and upper <= 2 * (1 - 1 / cycle.h) + SANDWICH_TOL
        passed += ok
        failed += not ok
    return SuiteResult("convex combination sandwiches the cycle metric", passed, failed)


def nwcr_optimality_suite(rng, h_min, h_max, trials, inject_fault=False) -> SuiteResult:
    passed = failed = 0
    for _ in range(trials):
        cycle = random_cycle(rng, h_min, h_max)
        h = cycle.h
        e = int(rng.integers(h))
        Ce = path_metric(cycle, e)
        xp, xq = random_distribution(rng, h), random_distribution(rng, h)
        greedy = plan_cost(nwcr_joint(xp, xq, _order(h, e, inject_fault)), Ce)
        _, best = solve_htp_exact(xp, xq, Ce)
        ok = abs(greedy - best) <= HTP_TOL
        passed += ok
        failed += not ok
    return SuiteResult("north-west corner plan is optimal under Monge costs", passed, failed)


def rounding_joint_suite(rng, h_min, h_max, trials, inject_fault=False) -> SuiteResult:
    passed = failed = 0
    for _ in range(trials):
        h = int(rng.integers(h_min, h_max + 1))
        order = list(rng.permutation(h))
        xp, xq = random_distribution(rng, h), random_distribution(rng, h)
        measured = joint_measure(xp, xq, order)
        if inject_fault:
            measured = measured.T + 0.01
        ok = float(np.max(np.abs(measured - nwcr_joint(xp, xq, order)))) <= JOINT_TOL
        passed += ok
        failed += not ok
    return SuiteResult("shared-threshold rounding realises the corner coupling", passed, failed)


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    "monge": monge_suite,
    "sandwich": sandwich_suite,
    "nwcr-optimality": nwcr_optimality_suite,
    "rounding-joint": rounding_joint_suite,
}


def run_all(h_min: int, h_max: int, trials: int, seed: int, inject_fault: bool = False) -> List[SuiteResult]:
    if h_min < 3 or h_max < h_min:
        raise ValueError(f"need 3 <= hubs-min <= hubs-max (got {h_min}, {h_max})")
    if trials < 1:
        raise ValueError("trials must be positive")
    results = []
    for k, suite in enumerate(SUITES.values()):
        rng = np.random.default_rng([seed, k])
        results.append(suite(rng, h_min, h_max, trials, inject_fault))
    return results
