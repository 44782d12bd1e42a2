import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclehub.instance import HubCycle, build_cycle_metric
from cyclehub.monge import (
    combined_path_metric,
    is_monge,
    monge_order,
    monge_violation,
    path_metric,
    theta_coefficients,
    verify_sandwich,
)


def brute_monge_excess(M):
    m = M.shape[0]
    worst = -np.inf
    for i, i2, j, j2 in itertools.product(range(m), repeat=4):
        if i < i2 and j < j2:
            worst = max(worst, M[i, j] + M[i2, j2] - M[i, j2] - M[i2, j])
    return worst


def path_metric_by_walk(cycle, e):
    """Distance along the only path avoiding edge e, found by walking both ways."""
    h = cycle.h
    D = np.zeros((h, h))
    for i in range(h):
        for j in range(h):
            k, d, blocked = i, 0.0, False
            while k != j:
                if k == e:
                    blocked = True
                    break
                d += cycle.edge_lengths[k]
                k = (k + 1) % h
            if blocked:
                k, d = i, 0.0
                while k != j:
                    d += cycle.edge_lengths[(k - 1) % h]
                    k = (k - 1) % h
            D[i, j] = d
    return D


def test_path_metric_examples():
    unit = HubCycle([1, 1, 1, 1])
    assert path_metric(unit, 0)[0, 1] == 3.0
    assert path_metric(unit, 2)[0, 1] == 1.0
    for e in range(4):
        assert np.all(np.diag(path_metric(unit, e)) == 0)


def test_path_metric_matches_walk(rng):
    for _ in range(200):
        cycle = HubCycle(rng.random(int(rng.integers(3, 9))))
        C = build_cycle_metric(cycle)
        for e in range(cycle.h):
            Ce = path_metric(cycle, e)
            np.testing.assert_allclose(Ce, path_metric_by_walk(cycle, e), atol=1e-12)
            assert np.array_equal(Ce, Ce.T)
            assert np.all(Ce >= C - 1e-12)


def test_monge_order():
    # 1-based (l+1, ..., h, 1, ..., l) shifted to 0-based hubs
    assert monge_order(4, 3) == [0, 1, 2, 3]
    assert monge_order(4, 0) == [1, 2, 3, 0]
    assert monge_order(3, 1) == [2, 0, 1]


def test_cycle_metric_is_not_monge_in_identity_order():
    C = build_cycle_metric(HubCycle([1, 1, 1, 1]))
    excess = brute_monge_excess(C)
    assert excess > 0
    # c_12 + c_24 - c_14 - c_22 = 1 + 2 - 1 - 0
    assert C[0, 1] + C[1, 3] - C[0, 3] - C[1, 1] == 2.0
    assert monge_violation(C)[0] == excess
    assert not is_monge(C)


def test_zero_matrix_is_monge():
    assert is_monge(np.zeros((5, 5)), [4, 2, 0, 1, 3])


def test_vectorised_scan_matches_loop(rng):
    for _ in range(100):
        M = rng.random((5, 5))
        assert monge_violation(M)[0] == pytest.approx(brute_monge_excess(M), abs=1e-12)


def test_every_path_metric_is_monge_in_its_order(rng):
    for _ in range(300):
        cycle = HubCycle(rng.random(int(rng.integers(3, 13))))
        for e in range(cycle.h):
            assert is_monge(path_metric(cycle, e), monge_order(cycle.h, e), 1e-9)


def test_theta_examples():
    np.testing.assert_allclose(theta_coefficients(HubCycle([1, 1, 1])), [1 / 3] * 3, atol=1e-15)
    np.testing.assert_allclose(theta_coefficients(HubCycle([1, 1, 1, 1])), [0.25] * 4, atol=1e-15)
    assert list(theta_coefficients(HubCycle([5, 1, 1, 1]))) == [1, 0, 0, 0]
    # exactly half the length counts as the degenerate case
    assert list(theta_coefficients(HubCycle([1, 3, 1, 1]))) == [0, 1, 0, 0]
    np.testing.assert_allclose(theta_coefficients(HubCycle([0, 0, 0])), [1 / 3] * 3)


def test_theta_matches_formula_by_hand():
    c = np.array([1.0, 2.0, 3.0, 2.5])
    L = c.sum()
    raw = [c[e] * np.prod([L - 2 * c[f] for f in range(4) if f != e]) for e in range(4)]
    np.testing.assert_allclose(theta_coefficients(HubCycle(c)), np.array(raw) / sum(raw), rtol=1e-13)


@settings(max_examples=100, deadline=None)
@given(
    lengths=st.lists(st.one_of(st.just(0.0), st.floats(1e-6, 1.0)), min_size=3, max_size=12),
    lam=st.floats(1e-3, 1e3),
)
def test_theta_properties(lengths, lam):
    cycle = HubCycle(lengths)
    theta = theta_coefficients(cycle)
    assert np.all(theta >= 0)
    assert abs(theta.sum() - 1) <= 1e-12
    np.testing.assert_allclose(theta_coefficients(HubCycle(np.array(lengths) * lam)), theta, atol=1e-12)


def test_sandwich_examples():
    tri = HubCycle([1, 1, 1])
    M = combined_path_metric(tri, theta_coefficients(tri))
    assert M[0, 1] == pytest.approx(4 / 3, abs=1e-15)
    lower, upper = verify_sandwich(tri, theta_coefficients(tri))
    assert lower <= 1e-12 and upper == pytest.approx(4 / 3, abs=1e-12)

    sq = HubCycle([1, 1, 1, 1])
    assert combined_path_metric(sq, theta_coefficients(sq))[0, 2] == pytest.approx(2.0, abs=1e-15)

    skew = HubCycle([5, 1, 1, 1])
    theta = theta_coefficients(skew)
    np.testing.assert_allclose(combined_path_metric(skew, theta), build_cycle_metric(skew))
    assert verify_sandwich(skew, theta) == (0.0, 1.0)


def test_sandwich_random(rng):
    for _ in range(500):
        cycle = HubCycle(rng.random(int(rng.integers(3, 13))))
        lower, upper = verify_sandwich(cycle, theta_coefficients(cycle))
        assert lower <= 1e-9
        assert upper <= 2 * (1 - 1 / cycle.h) + 1e-9
