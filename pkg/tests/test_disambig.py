import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fatmax import oracles
from fatmax.core import STAR, PartialClass
from fatmax.dims import BudgetExceeded, vc_dim_partial
from fatmax.disambig import (Disambiguation, disambiguation_vc, greedy_disambiguation,
                             is_disambiguation, min_vc_disambiguation_exact,
                             singleton_disambiguation, size_bound_sharp, size_bound_simple,
                             size_check)
from fatmax.generators import enumerate_partial_classes, random_partial_class


def D(rows, assignment):
    return Disambiguation(np.array(rows), assignment)


def test_is_disambiguation_examples():
    assert is_disambiguation(PartialClass([[1, "*"]]), D([[1, 0]], [0]))
    assert not is_disambiguation(PartialClass([[1, "*"]]), D([[0, 0]], [0]))
    assert is_disambiguation(PartialClass([[1, "*"], ["*", 0]]), D([[1, 0]], [0, 0]))
    assert not is_disambiguation(PartialClass([[1, "*"]]), D([[1, 0]], [1]))


def test_total_rows_only():
    with pytest.raises(ValueError):
        Disambiguation(np.array([[STAR, 0]]), [0])


def test_exact_on_total_class_is_identity():
    P = PartialClass([[0, 1, 1], [1, 0, 1], [0, 0, 0]])
    Dx, vc = min_vc_disambiguation_exact(P)
    assert np.array_equal(Dx.total, P.values) and vc == vc_dim_partial(P).dimension


def test_exact_two_point_example():
    Dx, vc = min_vc_disambiguation_exact(PartialClass([[0, "*"], ["*", 1]]))
    assert vc == 0 and Dx.total.tolist() == [[0, 1]] and Dx.assignment == (0, 0)


def _bruteforce_min_vc(P):
    opts = []
    for row in P.values:
        stars = np.flatnonzero(row == STAR)
        cs = []
        for fill in itertools.product((0, 1), repeat=len(stars)):
            r = row.copy()
            r[stars] = fill
            cs.append(tuple(int(v) for v in r))
        opts.append(cs)
    return min(oracles.vc_bruteforce(np.array(sorted(set(choice)))) for choice in itertools.product(*opts))


@pytest.mark.parametrize("seed", range(12))
def test_exact_matches_bruteforce(seed):
    rng = np.random.default_rng(seed)
    P = random_partial_class(rng, 4, 4, 0.4)
    Dx, vc = min_vc_disambiguation_exact(P)
    assert is_disambiguation(P, Dx)
    assert vc == disambiguation_vc(Dx) == _bruteforce_min_vc(P)


def test_exact_limits():
    with pytest.raises(BudgetExceeded):
        min_vc_disambiguation_exact(PartialClass(np.full((2, 6), STAR)))
    rng = np.random.default_rng(0)
    with pytest.raises(BudgetExceeded):
        min_vc_disambiguation_exact(random_partial_class(rng, 5, 10, 0.8), budget_nodes=5)


def test_singleton_examples():
    assert singleton_disambiguation(PartialClass([[0, "*"], ["*", "*"]])).total.tolist() == [[0, 0]]
    assert singleton_disambiguation(PartialClass([["*", 1], ["*", "*"]])).total.tolist() == [[0, 1]]
    assert singleton_disambiguation(PartialClass([[0, "*"], ["*", 1]])).total.tolist() == [[0, 1]]
    with pytest.raises(ValueError):
        singleton_disambiguation(PartialClass([[0], [1]]))


def test_singleton_on_every_vc0_class_over_3_points():
    count = 0
    for P in enumerate_partial_classes(3, 3):
        if vc_dim_partial(P).dimension:
            continue
        count += 1
        S = singleton_disambiguation(P)
        assert S.size == 1 and is_disambiguation(P, S)
        assert np.array_equal(greedy_disambiguation(P).total, S.total)
    assert count > 0


def test_greedy_identity_on_total():
    P = PartialClass([[0, 1], [1, 1]])
    G = greedy_disambiguation(P)
    assert np.array_equal(G.total, P.values) and G.assignment == (0, 1)


def test_greedy_majority_fill():
    G = greedy_disambiguation(PartialClass([[1, "*"], [1, 0], ["*", "*"]]))
    assert G.total.tolist() == [[1, 0]]


@st.composite
def partial(draw):
    m = draw(st.integers(1, 4))
    n = draw(st.integers(1, 5))
    rows = draw(st.lists(st.lists(st.sampled_from([0, 1, "*"]), min_size=m, max_size=m), min_size=n, max_size=n))
    return PartialClass(rows)


@given(partial())
def test_disambiguation_orders(P):
    G = greedy_disambiguation(P)
    Dx, vc = min_vc_disambiguation_exact(P)
    assert is_disambiguation(P, G) and is_disambiguation(P, Dx)
    assert vc_dim_partial(P).dimension <= vc <= disambiguation_vc(G)
    assert vc_dim_partial(P).dimension <= vc_dim_partial(G.as_class()).dimension


def test_size_bounds():
    assert size_bound_sharp(4, 1) == 5 ** (2 * 2 + 2)
    assert size_bound_simple(4, 1) == 4 ** 10


@pytest.mark.parametrize("seed", range(8))
def test_size_check_vc1_on_4_points(seed):
    rng = np.random.default_rng(100 + seed)
    while True:
        P = random_partial_class(rng, 4, 5, 0.3)
        if vc_dim_partial(P).dimension == 1:
            break
    sc = size_check(P)
    assert sc.vc_partial == 1 and sc.holds and sc.size <= 4 ** (5 * 1 * 2)


def test_disambiguation_json():
    G = greedy_disambiguation(PartialClass([[1, "*"], [0, 0]]))
    assert Disambiguation.from_dict(G.to_dict()).total.tolist() == G.total.tolist()
    assert '"assignment"' in G.to_json()
