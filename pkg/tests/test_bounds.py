import math

import pytest
from hypothesis import given, strategies as st

from fatmax.bounds import (BoundParams, Log, bound_report, check_elementary_facts, component_scale,
                           probe_rhs, evaluate_bound, report_csv)
from fatmax.compose import k_fold_max
from fatmax.dims import fat_dim
from fatmax.generators import cube_class


def test_examples():
    assert evaluate_bound("THM1", BoundParams(D=1)) == pytest.approx(506.207, abs=1e-3)
    assert evaluate_bound("THM1", BoundParams(D=0)) == 0
    assert evaluate_bound("THM4_BLUMER", BoundParams(d=1, k=2)) == pytest.approx(14.334, abs=1e-3)
    assert evaluate_bound("LOG2X", BoundParams(A=1)) == pytest.approx(3 * math.log(3))
    assert evaluate_bound("FAT_HYP", BoundParams(gamma=1, R=1, d=20)) == 9


def test_log_floor():
    assert Log(0.5) == 1 and Log(math.e ** 2) == pytest.approx(2)


def test_errors():
    with pytest.raises(ValueError):
        evaluate_bound("THM1", BoundParams())
    with pytest.raises(ValueError):
        evaluate_bound("THM2", BoundParams(D=1, R=1, k=2, epsilon=0.7))
    with pytest.raises(ValueError):
        evaluate_bound("NOPE", BoundParams())
    with pytest.raises(ValueError):
        BoundParams(gamma=0)
    assert evaluate_bound("THM2", BoundParams(D=1, R=1, k=2, epsilon=0.5)) > 0


@given(st.integers(1, 10_000))
def test_explicit_max_bound_monotone(D):
    assert evaluate_bound("THM1", BoundParams(D=D + 1)) > evaluate_bound("THM1", BoundParams(D=D))


@given(st.lists(st.floats(0.1, 10), min_size=1, max_size=5), st.floats(0.1, 5), st.floats(0.1, 10))
def test_radius_bound_scale_consistent(Rs, g, lam):
    a = evaluate_bound("THM3", BoundParams(gamma=g, R_list=Rs))
    b = evaluate_bound("THM3", BoundParams(gamma=lam * g, R_list=[lam * r for r in Rs]))
    assert a == pytest.approx(b, rel=1e-9)


def test_component_scale():
    p = BoundParams(gamma=2, k=4, epsilon=0.5, c=1)
    assert component_scale("THM2", p) == 1.0
    assert component_scale("DUAN", p) == 1.0
    assert component_scale("THM1", p) == 2


def test_elementary_boundary_cases():
    A = 1.0
    x = 3 * A * math.log(3 * A)
    assert not x <= A * math.log2(x) or x <= 3 * A * math.log(3 * A)
    v, u, k = [1.0, 1.0], 2.0, 2
    lhs = sum(vi * math.log(u / vi) for vi in v)
    assert lhs == pytest.approx(sum(v) * math.log(u * k / sum(v)))


def test_elementary_facts():
    r = check_elementary_facts(2000, seed=3)
    assert r["ok"] and r["max_violation"] <= 1e-9
    assert r["log2x"]["hypothesis_held"] > 0 and r["log2y"]["hypothesis_held"] > 0


def test_report_cube_pair():
    comps = [cube_class(1), cube_class(1)]
    G = k_fold_max(comps)
    inst = [("cube", fat_dim(G, 1.0), [fat_dim(F, 1.0) for F in comps])]
    rows = bound_report(inst, BoundParams(gamma=1.0), ("THM1",))
    r = rows[0]
    assert r.fat_components == [1, 1]
    assert r.rhs["THM1"] == pytest.approx(25 * 2 * math.log(180) ** 2)
    assert r.fat_max <= r.rhs["THM1"] and not r.violations()
    assert r.probe == pytest.approx(probe_rhs(2, [1, 1]))


def test_report_k1_identity():
    F = cube_class(2)
    G = k_fold_max([F])
    rows = bound_report([("one", fat_dim(G, 1.0), [fat_dim(F, 1.0)])], BoundParams(), ("THM1",))
    assert rows[0].fat_max == rows[0].fat_components[0] == 2 and not rows[0].violations()


def test_csv_columns():
    F = cube_class(1)
    rows = bound_report([("a", fat_dim(F, 1.0), [fat_dim(F, 1.0)])], BoundParams(R=1), ("THM1", "THM3"))
    text = report_csv(rows, ("THM1", "THM3"))
    header = text.splitlines()[0].split(",")
    assert header[:6] == ["instance_id", "k", "d", "gamma", "fat_max", "fat_components"]
    assert "rhs_THM3" in header and "slack_THM1" in header and header[-1] == "probe"
    assert text.splitlines()[1].endswith("PROBE")
