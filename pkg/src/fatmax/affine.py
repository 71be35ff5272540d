"""Affine classes on the Euclidean unit ball: samplers, shattering witnesses and halfspace unions."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from .core import SampledClass
from .dims import ShatterCertificate, ZERO, check_certificate

WITNESS_ATOL = 1e-9


@dataclass(frozen=True)
class AffineSpec:
    """Affine functions ``w.x + b`` with ``|w| <= R`` and ``|b| <= R`` (or ``|b| <= b_range`` when semi-bounded)."""

    d: int
    R: float = 1.0
    semi_bounded: bool = False
    b_range: Optional[float] = None
    n_functions: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.d < 1 or not self.R > 0:
            raise ValueError("need d >= 1 and R > 0")

    @property
    def intercept_bound(self) -> float:
        if not self.semi_bounded:
            return self.R
        return 2 * self.R if self.b_range is None else self.b_range


def _check_points(points) -> np.ndarray:
    X = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if np.any(np.linalg.norm(X, axis=1) > 1 + 1e-12):
        raise ValueError("points must lie in the unit ball")
    return X


def sample_ball(n: int, d: int, rng, radius: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(n, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * radius * rng.uniform(0, 1, size=(n, 1)) ** (1.0 / d)


def sample_affine_class(spec: AffineSpec, points) -> SampledClass:
    X = _check_points(points)
    if X.shape[1] != spec.d:
        raise ValueError(f"points are {X.shape[1]}-dimensional, spec says d={spec.d}")
    rng = np.random.default_rng(spec.seed)
    W = sample_ball(spec.n_functions, spec.d, rng, spec.R)
    B = rng.uniform(-spec.intercept_bound, spec.intercept_bound, size=spec.n_functions)
    meta = {"generator": "affine", "d": spec.d, "R": spec.R, "semi_bounded": spec.semi_bounded,
            "b_bound": spec.intercept_bound, "seed": spec.seed,
            "params": [[w.tolist(), float(b)] for w, b in zip(W, B)]}
    return SampledClass(W @ X.T + B[:, None], None, meta)


def simplex_points(d: int) -> np.ndarray:
    """Vertices of a regular simplex inscribed in the unit sphere of R^d (``d + 1`` points)."""
    E = np.eye(d + 1) - 1.0 / (d + 1)
    # orthonormal basis of the hyperplane sum(x) = 0
    Q, _ = np.linalg.qr(E[:, :d])
    P = E @ Q
    P /= np.linalg.norm(P, axis=1, keepdims=True)
    if d == 1:
        P = np.sort(P, axis=0)
    return P


def simplex_shatter_witness(d: int, gamma: float):
    """``d + 1`` points and ``2^(d+1)`` affine functions shattering them at zero with margin ``gamma``.

    Each function interpolates ``w.x_i + b = gamma * y_i``.  Returns
    ``(points, class, certificate)``; witnesses come from a linear solve, so
    validate with ``atol`` around :data:`WITNESS_ATOL`.
    """
    X = simplex_points(d)
    A = np.hstack([X, np.ones((d + 1, 1))])
    patterns = list(itertools.product((-1, 1), repeat=d + 1))
    params = [np.linalg.solve(A, gamma * np.asarray(y, dtype=np.float64)) for y in patterns]
    rows = [A @ p for p in params]
    F = SampledClass(np.array(rows), None, {
        "generator": "simplex", "d": d, "gamma": gamma,
        "params": [[p[:-1].tolist(), float(p[-1])] for p in params]})
    cert = ShatterCertificate(tuple(range(d + 1)), (0.0,) * (d + 1),
                              {y: i for i, y in enumerate(patterns)}, gamma)
    return X, F, cert


# -- separability ------------------------------------------------------------------

def separating_affine(points, labels):
    """Affine ``(w, b)`` with ``y_i (w.x_i + b) >= 1`` for all ``i``, or ``None`` if none exists.

    Solved as an LP feasibility problem with HiGHS; the returned pair is
    rescaled so the smallest margin is exactly 1 up to rounding.
    """
    X = np.atleast_2d(np.asarray(points, dtype=np.float64))
    y = np.asarray(labels, dtype=np.float64)
    n, d = X.shape
    if n == 0:
        return np.zeros(d), 1.0
    A = -y[:, None] * np.hstack([X, np.ones((n, 1))])
    res = linprog(np.zeros(d + 1), A_ub=A, b_ub=-np.ones(n), bounds=[(None, None)] * (d + 1),
                  method="highs")
    if res.status != 0:
        return None
    z = res.x
    margins = y * (X @ z[:-1] + z[-1])
    lo = margins.min()
    if lo <= 0:
        return None
    z = z / lo
    return z[:-1], float(z[-1])


def separability_oracle(points, labels) -> bool:
    """Whether some affine function strictly separates the +1 points from the -1 points."""
    return separating_affine(points, labels) is not None


def _set_partitions(items: list, k: int):
    """Partitions of ``items`` into at most ``k`` nonempty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest, k):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        if len(part) < k:
            yield [[first]] + part


class _UnionOracle:
    def __init__(self, X: np.ndarray):
        self.X = X
        self.cache: dict = {}
        self.lp_calls = 0

    def block(self, block: tuple, negatives: tuple):
        key = (block, negatives)
        if key not in self.cache:
            self.lp_calls += 1
            idx = list(block) + list(negatives)
            y = [1] * len(block) + [-1] * len(negatives)
            self.cache[key] = separating_affine(self.X[idx], y)
        return self.cache[key]

    def realize(self, labels, k: int):
        """Halfspaces ``[(w, b), ...]`` whose union is exactly the positive set, or ``None``."""
        pos = [i for i, s in enumerate(labels) if s > 0]
        neg = tuple(i for i, s in enumerate(labels) if s <= 0)
        if not pos:
            return []
        for part in _set_partitions(pos, k):
            found = []
            for blk in part:
                h = self.block(tuple(sorted(blk)), neg)
                if h is None:
                    break
                found.append(h)
            else:
                return found
        return None


def union_feasible(points, labels, k: int) -> bool:
    X = np.atleast_2d(np.asarray(points, dtype=np.float64))
    return _UnionOracle(X).realize(labels, k) is not None


def union_shatters(points, k: int, oracle: Optional[_UnionOracle] = None):
    """Per-labeling halfspace witnesses if unions of ``k`` halfspaces shatter ``points``, else ``None``."""
    X = np.atleast_2d(np.asarray(points, dtype=np.float64))
    oracle = oracle or _UnionOracle(X)
    out = {}
    for y in itertools.product((-1, 1), repeat=X.shape[0]):
        h = oracle.realize(y, k)
        if h is None:
            return None
        out[y] = h
    return out


def union_certificate(points, witnesses: dict, k: int, gamma: float):
    """Turn halfspace-union witnesses into a zero-shift ``gamma`` certificate for the k-fold max.

    Each labeling's halfspaces have margin at least 1 against every negative,
    so ``gamma * max_j (w_j.x + b_j)`` is ``>= gamma`` on positives and
    ``<= -gamma`` on negatives.  Missing components are the constant ``-1``.
    """
    X = np.atleast_2d(np.asarray(points, dtype=np.float64))
    rows, wit, params = [], {}, []
    for i, (y, hs) in enumerate(sorted(witnesses.items())):
        hs = list(hs) + [(np.zeros(X.shape[1]), -1.0)] * (k - len(hs))
        vals = np.max([X @ w + b for w, b in hs], axis=0)
        rows.append(gamma * vals)
        wit[y] = i
        params.append([[(gamma * np.asarray(w)).tolist(), gamma * b] for w, b in hs])
    F = SampledClass(np.array(rows), None, {"generator": "halfspace_union", "k": k, "params": params})
    cert = ShatterCertificate(tuple(range(X.shape[0])), (0.0,) * X.shape[0], wit, gamma)
    return F, cert


# -- union shattering search -------------------------------------------------------------

def moment_curve(m: int, d: int) -> np.ndarray:
    t = np.linspace(-1, 1, m)
    P = np.stack([t ** (j + 1) for j in range(d)], axis=1)
    return P / max(1.0, np.linalg.norm(P, axis=1).max())


def _candidate_pools(m: int, d: int, rng, n_random: int):
    yield "moment", moment_curve(m, d)
    if d >= 2:
        ang = 2 * np.pi * np.arange(m) / m
        circ = np.zeros((m, d))
        circ[:, 0], circ[:, 1] = np.cos(ang), np.sin(ang)
        yield "circle", circ
    for j in range(n_random):
        yield f"random{j}", sample_ball(m, d, rng)


@dataclass
class UnionSearchResult:
    d: int
    k: int
    size: int
    points: np.ndarray
    pool: str
    exhausted_budget: bool
    lp_calls: int
    tried: list = field(default_factory=list)


def halfspace_union_shatter_search(d: int, k: int, m_max: int = 8, budget: int = 200_000,
                                   seed: int = 0, n_random: int = 6) -> UnionSearchResult:
    """Largest point set found that unions of ``k`` halfspaces in R^d shatter.

    Sizes grow from 1 until no candidate configuration of the current size is
    shattered.  Candidates are a moment curve, a circle (d >= 2) and
    ``n_random`` random draws from the unit ball.  The answer is a certified
    lower bound; ``budget`` caps LP calls.
    """
    if m_max > 10:
        raise ValueError("m_max is capped at 10")
    rng = np.random.default_rng(seed)
    best = UnionSearchResult(d, k, 0, np.zeros((0, d)), "", False, 0)
    calls = 0
    for m in range(1, m_max + 1):
        hit = None
        for name, P in _candidate_pools(m, d, rng, n_random):
            oracle = _UnionOracle(P)
            best.tried.append((m, name))
            w = union_shatters(P, k, oracle)
            calls += oracle.lp_calls
            if w is not None:
                hit = (name, P)
                break
            if calls > budget:
                best.exhausted_budget = True
                best.lp_calls = calls
                return best
        if hit is None:
            break
        best.size, best.pool, best.points = m, hit[0], hit[1]
    best.lp_calls = calls
    return best


# -- property checks ---------------------------------------------------------------------

def affine_vc_exhaustive(points) -> int:
    """Largest subset of ``points`` on which every labeling is affinely separable."""
    X = np.atleast_2d(np.asarray(points, dtype=np.float64))
    best = 0
    for size in range(1, X.shape[0] + 1):
        found = False
        for S in itertools.combinations(range(X.shape[0]), size):
            if all(separability_oracle(X[list(S)], y) for y in itertools.product((-1, 1), repeat=size)):
                found = True
                break
        if not found:
            break
        best = size
    return best


def semi_bounded_bound(d: int, R: float, gamma: float) -> float:
    """``min{d + 1, (3R/gamma)^2}``."""
    return min(d + 1, (3 * R / gamma) ** 2)
