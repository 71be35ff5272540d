"""Seeded generators for small test classes.

Values are drawn from coarse grids (integers or half-integers) so that margin
comparisons are exact in floating point.
"""

from __future__ import annotations

import itertools

import numpy as np

from .core import STAR, PartialClass, SampledClass

GENERATOR_VERSION = "1"


def cube_class(n: int, gamma: float = 1.0) -> SampledClass:
    """``{-gamma, gamma}^n``: every sign pattern at margin exactly ``gamma``."""
    rows = np.array(list(itertools.product((-gamma, gamma), repeat=n)), dtype=np.float64)
    return SampledClass(rows, None, {"generator": "cube", "n": n, "gamma": gamma})


def random_grid_class(rng, max_rows: int = 6, max_points: int = 4, lo: int = -3, hi: int = 3,
                      min_rows: int = 1, min_points: int = 1, step: float = 1.0) -> SampledClass:
    n = int(rng.integers(min_rows, max_rows + 1))
    m = int(rng.integers(min_points, max_points + 1))
    vals = rng.integers(lo, hi + 1, size=(n, m)) * step
    return SampledClass(vals.astype(np.float64), None,
                        {"generator": "grid", "version": GENERATOR_VERSION})


def half_difference_closure(F: SampledClass, rounds: int = 1) -> SampledClass:
    """Add every pairwise half-difference ``(f - g) / 2`` to the class, ``rounds`` times."""
    V = F.values
    for _ in range(rounds):
        diffs = ((V[:, None, :] - V[None, :, :]) / 2).reshape(-1, V.shape[1])
        V = np.unique(np.vstack([V, diffs]), axis=0)
    return F.with_values(V, generator="half_difference_closure")


def cube_grid_class(n: int, step: float) -> SampledClass:
    """``[-1, 1]^n`` discretized to a grid of spacing ``step``."""
    axis = np.arange(-1.0, 1.0 + 1e-12, step)
    rows = np.array(list(itertools.product(axis, repeat=n)))
    return SampledClass(rows, None, {"generator": "cube_grid", "n": n, "step": step})


def grid_packing_count(n: int, step: float, t: float) -> int:
    """Size of an explicit ``L_inf`` packing of the grid at separation ``> 2t``: keep every j-th grid value per axis."""
    axis = np.arange(-1.0, 1.0 + 1e-12, step)
    stride = int(np.floor(2 * t / step + 1e-12)) + 1
    return len(axis[::stride]) ** n


def random_partial_class(rng, n_points: int, n_rows: int, p_star: float = 0.3) -> PartialClass:
    vals = rng.integers(0, 2, size=(n_rows, n_points)).astype(np.int8)
    vals[rng.random((n_rows, n_points)) < p_star] = STAR
    return PartialClass(vals)


def all_partial_rows(n_points: int) -> list:
    return [np.array(r, dtype=np.int8) for r in itertools.product((0, 1, STAR), repeat=n_points)]


def enumerate_partial_classes(n_points: int, max_rows: int):
    """Every set of at most ``max_rows`` distinct partial rows over ``n_points`` points."""
    rows = all_partial_rows(n_points)
    for size in range(1, max_rows + 1):
        for combo in itertools.combinations(range(len(rows)), size):
            yield PartialClass(np.stack([rows[i] for i in combo]))
