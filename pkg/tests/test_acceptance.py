"""Acceptance gate: the twelve criteria, one PASS/FAIL line each.

Run with pytest (lines appear in the terminal summary) or directly:
``python tests/test_acceptance.py``.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fatmax import suites  # noqa: E402
from conftest import ACCEPTANCE_LINES  # noqa: E402

SEED = 0

CRITERIA = [
    ("C01 exact dimensions of sign cubes and single rows", "exact_dims", 60.0),
    ("C02 fat_dim vs shift scan and gap search vs grid oracle", "oracle_agreement", None),
    ("C03 zero-shift fat equals VC of discretized class", "faat_vc_identity", None),
    ("C04 fat(F_max) <= 25 D log^2(90 D), D = 0 gives 0", "max_fat_bound", None),
    ("C05 covering product bound and p-monotonicity", "product_bound", None),
    ("C06 pointwise max inequalities within 1e-12", "pointwise", None),
    ("C07 affine witnesses, VC d+1, semi-bounded fat bound", "affine", None),
    ("C08 zero-shift fat of affine maxima <= 2(d+1)k log(3k)", "affine_max_bound", None),
    ("C09 halfspace-union search sizes 2 and 3", "union_search", 120.0),
    ("C10 Maurey net coverage and size", "maurey", None),
    ("C11 disambiguation: singleton, exact <= greedy, size bound", "disambiguation", None),
    ("C12 elementary log and Jensen facts within 1e-9", "elementary", None),
]


def evaluate(label, suite, time_limit):
    r = suites.run_suite(suite, SEED)
    ok = r.ok and (time_limit is None or r.elapsed < time_limit)
    limit = f", limit {time_limit:.0f}s" if time_limit else ""
    line = (f"{'PASS' if ok else 'FAIL'} {label}: {r.checks} checks, {r.violations} violations, "
            f"{r.elapsed:.1f}s{limit}")
    return ok, line, r


@pytest.mark.parametrize("label,suite,time_limit", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(label, suite, time_limit):
    ok, line, r = evaluate(label, suite, time_limit)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, (line, r.failures)


def test_suite_sizes_meet_minimums():
    r = suites.max_fat_bound(seed=SEED)
    assert r.details["degenerate"] > 0 and r.details["degenerate"] + r.details["positive"] >= 100
    assert suites.product_bound(seed=SEED).details["instances"] >= 200


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line, _ in results:
        print(line)
    sys.exit(0 if all(ok for ok, _, _ in results) else 1)
