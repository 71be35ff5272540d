import numpy as np
import pytest
from hypothesis import given, strategies as st

from fatmax.compose import (FULL, SAMPLED, MaxSpec, boolean_max, hinge_loss_class, k_fold_max,
                            label_flip_class, scale_class, shift_class, sign_threshold_class)
from fatmax.core import SampledClass
from fatmax.covering import MetricSpec, distance_matrix
from fatmax.dims import faat_dim
from fatmax.generators import cube_class

from conftest import grid_classes


def C(rows):
    return SampledClass(np.array(rows, dtype=float))


def test_max_of_singletons():
    assert k_fold_max([C([[1, -1]]), C([[-1, 1]])]).values.tolist() == [[1, 1]]


def test_k1_is_identity():
    F = C([[1, 2], [3, -4]])
    assert k_fold_max([F]) == F


def test_cube_pair_has_16_tuples_4_rows():
    G = k_fold_max([cube_class(2), cube_class(2)])
    assert G.n_functions == 16
    assert len({tuple(r) for r in G.values.tolist()}) == 4
    assert k_fold_max([cube_class(2)] * 2, MaxSpec(dedup=True)).n_functions == 4


def test_tuple_provenance_lexicographic():
    G = k_fold_max([C([[0], [1]]), C([[5], [-5]])])
    assert G.metadata["tuples"] == [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert G.values.ravel().tolist() == [5, 0, 5, 1]


def test_sampled_mode_is_seeded_subset():
    F = C(np.arange(20).reshape(10, 2))
    a = k_fold_max([F, F], MaxSpec(SAMPLED, count=7, seed=3))
    b = k_fold_max([F, F], MaxSpec(SAMPLED, count=7, seed=3))
    assert a == b and a.n_functions == 7
    full = {tuple(r) for r in k_fold_max([F, F]).values.tolist()}
    assert {tuple(r) for r in a.values.tolist()} <= full


def test_maxspec_validation_and_cap():
    with pytest.raises(ValueError):
        MaxSpec(SAMPLED, count=3)
    with pytest.raises(ValueError):
        MaxSpec("bogus")
    with pytest.raises(ValueError):
        k_fold_max([cube_class(3)] * 3, MaxSpec(FULL, cap=100))
    with pytest.raises(ValueError):
        k_fold_max([cube_class(2), cube_class(3)])
    assert MaxSpec.from_dict(MaxSpec(SAMPLED, count=2, seed=1).to_dict()) == MaxSpec(SAMPLED, count=2, seed=1)


def test_shift_examples():
    F = C([[3, 4], [1, 1]])
    assert shift_class(F, 0) == F
    assert shift_class(F, F.values[0]).values[0].tolist() == [0, 0]


def test_sign_examples():
    assert sign_threshold_class(C([[-0.5, 0, 2]])).values.tolist() == [[0, 1, 1]]
    assert sign_threshold_class(C([[-1, -2]])).values.tolist() == [[0, 0]]


def test_hinge_examples():
    H = hinge_loss_class(C([[0.3, 2.0]]), [1, 1])
    assert H.values[0].tolist() == pytest.approx([0.7, 0.0])
    assert hinge_loss_class(C([[0.3]]), [-1]).values[0, 0] == pytest.approx(1.3)
    with pytest.raises(ValueError):
        hinge_loss_class(C([[0.3]]), [0])


def test_scale_examples():
    F = cube_class(3)
    assert scale_class(F, 1) == F
    assert faat_dim(scale_class(F, 2), 2.0).dimension == faat_dim(F, 1.0).dimension
    G = C([[-1, 0.5, 0]])
    assert np.array_equal(sign_threshold_class(scale_class(G, 3)).values, sign_threshold_class(G).values)


@st.composite
def class_tuples(draw):
    m = draw(st.integers(1, 3))
    k = draw(st.integers(1, 3))
    out = []
    for _ in range(k):
        n = draw(st.integers(1, 3))
        rows = draw(st.lists(st.lists(st.integers(-3, 3), min_size=m, max_size=m), min_size=n, max_size=n))
        out.append(C(rows))
    return out


@given(class_tuples(), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_max_commutes_with_shift(classes, r):
    r = r[:classes[0].n_points]
    lhs = k_fold_max([shift_class(F, r) for F in classes])
    rhs = shift_class(k_fold_max(classes), r)
    assert np.array_equal(lhs.values, rhs.values)


@given(class_tuples())
def test_max_commutes_with_sign(classes):
    lhs = sign_threshold_class(k_fold_max(classes))
    rhs = boolean_max([sign_threshold_class(F) for F in classes])
    assert np.array_equal(lhs.values, rhs.values)


@given(class_tuples())
def test_max_dominates_members(classes):
    G = k_fold_max(classes)
    for row, tup in zip(G.values, G.metadata["tuples"]):
        for F, j in zip(classes, tup):
            assert np.all(row >= F.values[j])


@given(grid_classes(), st.data())
def test_label_flip_preserves_sup_distances(F, data):
    y = data.draw(st.lists(st.sampled_from([-1, 1]), min_size=F.n_points, max_size=F.n_points))
    G = label_flip_class(F, y)
    assert np.array_equal(np.abs(G.values), np.abs(F.values))
    assert np.array_equal(G.values * np.array(y), F.values)
    m = MetricSpec()
    assert np.allclose(distance_matrix(G.values, m), distance_matrix(F.values, m))
    # hinge is a 1-Lipschitz image of the flipped class
    H = hinge_loss_class(F, y)
    assert np.all(distance_matrix(H.values, m) <= distance_matrix(F.values, m) + 1e-12)
