import itertools

import numpy as np
import pytest

from cyclehub.instance import HubCycle, Instance, evaluate_assignment


def enumerate_optimum(instance):
    """Reference optimum by a plain loop over every allocation."""
    C = instance.metric()
    best = None
    for a in itertools.product(range(instance.h), repeat=instance.n):
        cost = evaluate_assignment(instance, a, C)
        if best is None or cost < best[1] - 1e-12:
            best = (a, cost)
    return best


def hard_instance(rng, h, n):
    """Unit cycle with sparse, conflicting spoke costs; the relaxation is sometimes fractional."""
    spokes = np.where(rng.random((n, h)) < 0.3, 0.0, rng.choice([1.0, 2.0, 5.0], size=(n, h)))
    flows = (rng.random((n, n)) < 0.7) * 1.0
    np.fill_diagonal(flows, 0.0)
    return Instance(HubCycle(np.ones(h)), spokes, flows)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def tiny_instance():
    # two non-hubs on a unit triangle; only flow is 1 -> 2
    return Instance(
        HubCycle([1.0, 1.0, 1.0]),
        [[0.0, 5.0, 5.0], [5.0, 5.0, 0.0]],
        [[0.0, 1.0], [0.0, 0.0]],
    )


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
