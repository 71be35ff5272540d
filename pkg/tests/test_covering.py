import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fatmax import oracles
from fatmax.compose import k_fold_max
from fatmax.core import Measure, SampledClass
from fatmax.covering import (INF, MetricSpec, check_max_pair_inequalities, check_max_tuple_inequality,
                             component_radius, covering_number, distance_matrix, is_cover,
                             lp_distance, maurey_cover, maurey_size_bound, maurey_terms,
                             net_coverage, sample_absconv, verify_product_bound)
from fatmax.dims import BudgetExceeded
from fatmax.generators import grid_packing_count, cube_grid_class

from conftest import grid_classes


def C(rows):
    return SampledClass(np.array(rows, dtype=float))


def test_lp_distance_examples():
    assert lp_distance([0, 0], [1, 1], MetricSpec(INF)) == 1
    assert lp_distance([0, 2], [0, 0], MetricSpec(2)) == pytest.approx(math.sqrt(2))
    assert lp_distance([0, 2], [0, 0], MetricSpec(1)) == pytest.approx(1)


def test_sup_distance_ignores_null_points():
    m = MetricSpec(INF, Measure([1.0, 0.0]))
    assert lp_distance([0, 0], [0, 9], m) == 0


def test_cover_examples():
    F = C([[0, 0], [1, 1], [2, 2]])
    r = covering_number(F, MetricSpec(), 1.0)
    assert r.size == 1 and r.members == (1,) and r.exact and r.proper
    assert covering_number(F, MetricSpec(), 0.5).size == 3
    assert covering_number(F, MetricSpec(), 2.0).size == 1


def test_cover_report_dict():
    d = covering_number(C([[0.0], [3.0]]), MetricSpec(2), 1.0).to_dict()
    assert d == {"radius": 1.0, "metric": {"p": 2, "weights": None}, "members": [0, 1],
                 "exact": True, "size": 2, "proper": True}


def test_improper_centers():
    F = C([[0, 0], [1, 1], [2, 2]])
    r = covering_number(F, MetricSpec(), 0.5, centers=[[0.5, 0.5], [1.5, 1.5], [9, 9]])
    assert r.size == 2 and not r.proper
    with pytest.raises(ValueError):
        covering_number(F, MetricSpec(), 0.5, centers=[[9, 9]])


def test_exact_row_limit():
    F = C(np.arange(30).reshape(30, 1))
    with pytest.raises(BudgetExceeded):
        covering_number(F, MetricSpec(), 0.1, max_rows=20)
    assert covering_number(F, MetricSpec(), 0.1, "greedy").size == 30


def test_node_budget():
    F = C(np.arange(16).reshape(16, 1) * 0.5)
    with pytest.raises(BudgetExceeded):
        covering_number(F, MetricSpec(), 0.6, budget_nodes=1)


@given(grid_classes(max_rows=7, max_points=3), st.sampled_from([1.0, 2.0, INF]),
       st.sampled_from([0.0, 0.5, 1.0, 2.0]))
def test_exact_cover_matches_enumeration(F, p, t):
    m = MetricSpec(p)
    uniq = np.unique(F.values, axis=0)
    r = covering_number(F, m, t)
    assert r.size == oracles.min_cover_bruteforce(distance_matrix(uniq, m), t * (1 + 1e-12) + 1e-12)
    assert is_cover(F, r.members, m, t)
    assert r.size <= covering_number(F, m, t, "greedy").size


@given(grid_classes(max_rows=7, max_points=3), st.sampled_from([0.5, 1.0]), st.sampled_from([1.5, 3.0]))
def test_radius_monotone(F, t1, t2):
    assert covering_number(F, MetricSpec(), t1).size >= covering_number(F, MetricSpec(), t2).size


@given(grid_classes(max_rows=7, max_points=4), st.sampled_from([0.5, 1.0, 2.0]))
def test_p_monotone(F, t):
    sizes = [covering_number(F, MetricSpec(p), t).size for p in (1.0, 2.0, 3.0, INF)]
    assert sizes == sorted(sizes)


def test_pair_inequalities():
    r = check_max_pair_inequalities(20_000, seed=1)
    assert r["max_violation"] <= 1e-12


def test_tuple_inequality():
    r = check_max_tuple_inequality(300, seed=2)
    assert r["max_violation"] <= 1e-12


def test_component_radius():
    assert component_radius(1.0, 4, 2) == 0.5
    assert component_radius(1.0, 4, INF) == 1.0


def test_product_bound_examples():
    F = C([[1, 2, 3]])
    rep = verify_product_bound([F, F], MetricSpec(), 0.5)
    assert rep.n_max == 1 and rep.product == 1 and rep.holds
    rng = np.random.default_rng(5)
    for p in (INF, 2.0):
        for _ in range(20):
            A, B = (C(rng.integers(-3, 4, size=(4, 3))) for _ in range(2))
            assert verify_product_bound([A, B], MetricSpec(p), 1.0).holds


@given(st.lists(grid_classes(max_rows=3, max_points=3), min_size=2, max_size=3),
       st.sampled_from([1.0, 2.0, INF]), st.sampled_from([0.5, 1.0, 2.0]))
def test_product_bound_property(classes, p, t):
    m = min(F.n_points for F in classes)
    classes = [SampledClass(F.values[:, :m]) for F in classes]
    assert verify_product_bound(classes, MetricSpec(p), t, max_rows=27).holds


@pytest.mark.parametrize("n,step,t", [(1, 0.25, 0.2), (2, 0.5, 0.3), (2, 0.25, 0.6), (3, 0.5, 0.4)])
def test_grid_cover_dominates_packing(n, step, t):
    F = cube_grid_class(n, step)
    N = covering_number(F, MetricSpec(), t, max_rows=F.n_functions).size
    assert N >= grid_packing_count(n, step, t) >= math.floor(1 / (2 * t)) ** n


def test_maurey_segment():
    net = maurey_cover(np.array([[2.0, 0.0]]), 1.0, 2.0)
    assert net.terms == 1
    Z = sample_absconv(np.array([[2.0, 0.0]]), 200, seed=0)
    assert net_coverage(net, Z).max() <= 2.0


def test_maurey_basis_r5():
    X = np.eye(5)
    net = maurey_cover(X, 1.0, 0.8)
    assert net.terms == 2 == maurey_terms(1.0, 0.8)
    Z = sample_absconv(X, 1000, seed=0)
    assert np.all(np.abs(Z).sum(axis=1) <= 1 + 1e-12)
    assert net_coverage(net, Z).max() <= 0.8
    assert net.size <= maurey_size_bound(5, 1.0, 0.8, c=3)


def test_maurey_limits():
    with pytest.raises(ValueError):
        maurey_cover(np.eye(3), 1.0, 0.4)
    with pytest.raises(ValueError):
        maurey_cover(np.eye(30), 1.0, 1.0)
