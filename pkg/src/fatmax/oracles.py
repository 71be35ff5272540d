"""Definition-level brute-force oracles.

These deliberately share no code with :mod:`fatmax.dims`: plain loops over
subsets, shift vectors and sign patterns, straight from the shattering
definitions.  They are slow and meant for classes with a handful of rows and
points.
"""

from __future__ import annotations

import itertools

import numpy as np

from .core import STAR


def _column_midpoints(col):
    vals = sorted(set(float(v) for v in col))
    return sorted({(v + w) / 2 for v in vals for w in vals})


def zero_shattered(rows, S, gamma) -> bool:
    """Every sign pattern on ``S`` has a row with ``y_i f(x_i) >= gamma``."""
    for y in itertools.product((-1, 1), repeat=len(S)):
        if not any(all(yi * row[i] >= gamma for yi, i in zip(y, S)) for row in rows):
            return False
    return True


def shattered_by_grid(values, S, gamma) -> bool:
    """``S`` is shattered for some shift ``r`` on the per-column midpoint grid."""
    values = np.asarray(values, dtype=float)
    rows = values.tolist()
    grids = [_column_midpoints(values[:, i]) for i in S]
    for r in itertools.product(*grids):
        shifted = [[row[i] - r[k] for k, i in enumerate(S)] for row in rows]
        if zero_shattered(shifted, range(len(S)), gamma):
            return True
    return False


def fat_bruteforce(values, gamma) -> int:
    values = np.asarray(values, dtype=float)
    n = values.shape[1]
    best = 0
    for size in range(1, n + 1):
        if any(shattered_by_grid(values, S, gamma) for S in itertools.combinations(range(n), size)):
            best = size
    return best


def faat_bruteforce(values, gamma) -> int:
    rows = np.asarray(values, dtype=float).tolist()
    n = len(rows[0])
    best = 0
    for size in range(1, n + 1):
        if any(zero_shattered(rows, S, gamma) for S in itertools.combinations(range(n), size)):
            best = size
    return best


def vc_bruteforce(values) -> int:
    """VC dimension of a partial (or total) 0/1/STAR matrix by exhaustive enumeration."""
    rows = [list(map(int, r)) for r in np.asarray(values)]
    n = len(rows[0])
    best = 0
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            seen = {tuple(r[i] for i in S) for r in rows if all(r[i] != STAR for i in S)}
            if len(seen) == 2 ** size:
                best = size
                break
    return best


def min_cover_bruteforce(dist, t) -> int:
    """Smallest set of centers (class rows) within ``t`` of every row, by enumeration."""
    dist = np.asarray(dist)
    n = dist.shape[0]
    close = dist <= t
    for size in range(1, n + 1):
        for C in itertools.combinations(range(n), size):
            if np.all(close[:, list(C)].any(axis=1)):
                return size
    return n


def _partitions(items, k):
    if not items:
        yield []
        return
    head, tail = items[0], items[1:]
    for part in _partitions(tail, k):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [head]] + part[i + 1:]
        if len(part) < k:
            yield part + [[head]]


def ray_union_feasible(x, labels, k) -> bool:
    """On the line, is the positive set a union of at most ``k`` rays (prefixes or suffixes in sorted order)?"""
    order = sorted(range(len(x)), key=lambda i: x[i])
    pos = frozenset(i for i, s in enumerate(labels) if s > 0)
    if not pos:
        return True
    rays = set()
    for j in range(len(order) + 1):
        rays.add(frozenset(order[:j]))
        rays.add(frozenset(order[j:]))
    rays = [r for r in rays if r and r <= pos]
    for size in range(1, k + 1):
        for combo in itertools.combinations(rays, size):
            if frozenset().union(*combo) == pos:
                return True
    return False


def planar_union_feasible(X, labels, k) -> bool:
    """In the plane: can the positives be split into at most ``k`` groups whose hulls miss the negatives' hull?"""
    from shapely.geometry import MultiPoint

    pts = [tuple(map(float, p)) for p in X]
    pos = [i for i, s in enumerate(labels) if s > 0]
    neg = [pts[i] for i, s in enumerate(labels) if s <= 0]
    if not pos or not neg:
        return True
    neg_hull = MultiPoint(neg).convex_hull
    for part in _partitions(pos, k):
        if all(not MultiPoint([pts[i] for i in blk]).convex_hull.intersects(neg_hull) for blk in part):
            return True
    return False
