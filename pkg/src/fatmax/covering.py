"""L_p(mu) distances, proper covering numbers and the max-composition product bound.

Covers are proper: centers are rows of the class.  The exact covering number
is a minimum set cover (row ``j`` covers row ``i`` when their distance is at
most ``t``) solved by branch and bound, seeded with the farthest-point greedy
cover as the incumbent.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .compose import MaxSpec, k_fold_max
from .core import Measure, SampledClass
from .dims import BudgetExceeded

INF = math.inf
MAX_EXACT_ROWS = 20
DIST_RTOL = 1e-12


@dataclass(frozen=True)
class MetricSpec:
    p: float = INF
    measure: Optional[Measure] = None

    def __post_init__(self):
        p = float(self.p)
        if not (p >= 1):
            raise ValueError(f"p must be in [1, inf], got {self.p!r}")
        object.__setattr__(self, "p", p)

    def weights(self, n: int) -> np.ndarray:
        if self.measure is None:
            return np.full(n, 1.0 / n)
        if len(self.measure) != n:
            raise ValueError(f"measure has {len(self.measure)} weights for {n} points")
        return self.measure.weights

    def to_dict(self) -> dict:
        return {"p": "inf" if math.isinf(self.p) else self.p,
                "weights": None if self.measure is None else self.measure.weights.tolist()}


def lp_distance(f, g, m: MetricSpec = MetricSpec()) -> float:
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    w = m.weights(f.size)
    diff = np.abs(f - g)
    if math.isinf(m.p):
        return float(diff[w > 0].max(initial=0.0))
    return float((w @ diff ** m.p) ** (1.0 / m.p))


def distance_matrix(values: np.ndarray, m: MetricSpec, others: Optional[np.ndarray] = None) -> np.ndarray:
    """Pairwise distances between rows of ``values`` (and rows of ``others`` when given)."""
    values = np.asarray(values, dtype=np.float64)
    others = values if others is None else np.asarray(others, dtype=np.float64)
    w = m.weights(values.shape[1])
    diff = np.abs(values[:, None, :] - others[None, :, :])
    if math.isinf(m.p):
        return diff[:, :, w > 0].max(axis=2, initial=0.0)
    return (diff ** m.p @ w) ** (1.0 / m.p)


def within(dist: np.ndarray, t: float) -> np.ndarray:
    """``dist <= t`` with a relative slack absorbing rounding in the p-th root."""
    return dist <= t * (1 + DIST_RTOL) + DIST_RTOL


@dataclass
class CoverReport:
    radius: float
    metric: MetricSpec
    members: tuple
    exact: bool
    size: int = field(init=False)
    proper: bool = True

    def __post_init__(self):
        self.members = tuple(int(i) for i in self.members)
        self.size = len(self.members)

    def to_dict(self) -> dict:
        return {"radius": self.radius, "metric": self.metric.to_dict(), "members": list(self.members),
                "exact": self.exact, "size": self.size, "proper": self.proper}


def greedy_cover(close: np.ndarray, dist: np.ndarray) -> list:
    """Farthest-point-first: repeatedly promote the row farthest from the current centers."""
    n = close.shape[0]
    centers = [0]
    covered = close[:, 0].copy()
    nearest = dist[:, 0].copy()
    while not covered.all():
        cand = np.where(covered, -np.inf, nearest)
        j = int(np.argmax(cand))
        centers.append(j)
        covered |= close[:, j]
        nearest = np.minimum(nearest, dist[:, j])
    return centers


def exact_cover(close: np.ndarray, incumbent: list, budget_nodes: Optional[int] = None) -> list:
    """Minimum set of columns of ``close`` covering every row (branch on the hardest row).

    ``close[i, j]`` says row ``i`` lies within the radius of candidate ``j``.
    """
    n, n_centers = close.shape
    sets = [int(sum(1 << int(i) for i in np.flatnonzero(close[:, j]))) for j in range(n_centers)]
    covers_row = [np.flatnonzero(close[i]).tolist() for i in range(n)]
    if not all(covers_row):
        raise ValueError("some row is not within t of any candidate center")
    full = (1 << n) - 1
    best = [list(incumbent)]
    max_gain = max(bin(s).count("1") for s in sets)
    nodes = [0]

    def rec(covered: int, chosen: list):
        nodes[0] += 1
        if budget_nodes is not None and nodes[0] > budget_nodes:
            raise BudgetExceeded("exact cover node budget exhausted")
        if covered == full:
            if len(chosen) < len(best[0]):
                best[0] = list(chosen)
            return
        uncovered = full & ~covered
        missing = bin(uncovered).count("1")
        if len(chosen) + math.ceil(missing / max_gain) >= len(best[0]):
            return
        # branch on the uncovered row with the fewest candidate centers
        row, opts = None, None
        u = uncovered
        while u:
            i = (u & -u).bit_length() - 1
            u &= u - 1
            o = covers_row[i]
            if opts is None or len(o) < len(opts):
                row, opts = i, o
        opts = sorted(opts, key=lambda j: (-bin(sets[j] & uncovered).count("1"), j))
        for j in opts:
            chosen.append(j)
            rec(covered | sets[j], chosen)
            chosen.pop()

    rec(0, [])
    return sorted(best[0])


def covering_number(F, m: MetricSpec = MetricSpec(), t: float = 1.0, method: str = "exact",
                    max_rows: int = MAX_EXACT_ROWS, budget_nodes: Optional[int] = None,
                    centers: Optional[np.ndarray] = None) -> CoverReport:
    """Smallest proper ``t``-cover of the rows of ``F`` under ``L_p(mu)``.

    ``method="exact"`` requires at most ``max_rows`` distinct rows; duplicates
    are collapsed first since they share a center.  Passing ``centers`` switches
    to an improper cover drawn from those candidate rows; ``members`` then index
    ``centers``.
    """
    values = F.values if isinstance(F, SampledClass) else np.asarray(F, dtype=np.float64)
    if t < 0:
        raise ValueError("radius must be nonnegative")
    if method not in ("exact", "greedy"):
        raise ValueError(f"unknown method {method!r}")
    uniq, first = np.unique(values, axis=0, return_index=True)
    if method == "exact" and uniq.shape[0] > max_rows:
        raise BudgetExceeded(f"exact cover limited to {max_rows} distinct rows, got {uniq.shape[0]}")
    if centers is not None:
        C = np.atleast_2d(np.asarray(centers, dtype=np.float64))
        close = within(distance_matrix(uniq, m, C), t)
        members = _greedy_set_cover(close)
        if method == "exact":
            members = exact_cover(close, members, budget_nodes)
        return CoverReport(t, m, sorted(members), method == "exact", proper=False)
    dist = distance_matrix(uniq, m)
    close = within(dist, t)
    members = greedy_cover(close, dist)
    if method == "exact":
        members = exact_cover(close, members, budget_nodes)
    return CoverReport(t, m, sorted(int(first[j]) for j in members), method == "exact")


def _greedy_set_cover(close: np.ndarray) -> list:
    covered = np.zeros(close.shape[0], dtype=bool)
    chosen = []
    while not covered.all():
        gain = (close & ~covered[:, None]).sum(axis=0)
        j = int(np.argmax(gain))
        if gain[j] == 0:
            raise ValueError("some row is not within t of any candidate center")
        chosen.append(j)
        covered |= close[:, j]
    return chosen


def is_cover(F, members, m: MetricSpec, t: float) -> bool:
    values = F.values if isinstance(F, SampledClass) else np.asarray(F, dtype=np.float64)
    dist = distance_matrix(values, m)
    return bool(within(dist[:, list(members)], t).any(axis=1).all())


# -- max-composition ---------------------------------------------------------------

def check_max_pair_inequalities(samples: int = 100_000, seed: int = 0,
                                ps: Sequence[float] = (1, 2, 3), scale: float = 1.0) -> dict:
    """Evaluate ``|a v b - c v d|^p <= |a-c|^p + |b-d|^p`` and its ``p = inf`` form.

    Returns the largest observed ``lhs - rhs`` per inequality; both should be
    at most zero up to rounding.
    """
    rng = np.random.default_rng(seed)
    a, b, c, d = rng.uniform(-scale, scale, size=(4, samples))
    # exercise ties as well
    ties = rng.random(samples) < 0.1
    c = np.where(ties, a, c)
    lhs = np.abs(np.maximum(a, b) - np.maximum(c, d))
    out = {"samples": samples, "seed": seed}
    for p in ps:
        v = lhs ** p - (np.abs(a - c) ** p + np.abs(b - d) ** p)
        out[f"max_violation_p{p:g}"] = float(v.max())
    v = lhs - np.maximum(np.abs(a - c), np.abs(b - d))
    out["max_violation_pinf"] = float(v.max())
    out["max_violation"] = max(val for key, val in out.items() if key.startswith("max_violation_"))
    return out


def check_max_tuple_inequality(samples: int = 1000, seed: int = 0, k_max: int = 5,
                               n_points: int = 6, ps: Sequence[float] = (1, 2, 3, INF)) -> dict:
    """Distance of two k-fold maxima against the per-component distances, random tuples and measures."""
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(samples):
        k = int(rng.integers(1, k_max + 1))
        f = rng.normal(size=(k, n_points)) * 3
        g = f + rng.normal(size=(k, n_points)) * rng.uniform(0, 3)
        w = rng.dirichlet(np.ones(n_points))
        m_f, m_g = f.max(axis=0), g.max(axis=0)
        for p in ps:
            metric = MetricSpec(p, Measure(w / w.sum()))
            lhs = lp_distance(m_f, m_g, metric)
            comps = np.array([lp_distance(f[i], g[i], metric) for i in range(k)])
            rhs = comps.max() if math.isinf(p) else float((comps ** p).sum() ** (1 / p))
            worst = max(worst, lhs - rhs)
    return {"samples": samples, "seed": seed, "max_violation": float(worst)}


def component_radius(t: float, k: int, p: float) -> float:
    return t if math.isinf(p) else t / k ** (1.0 / p)


@dataclass
class ProductBoundReport:
    p: float
    t: float
    k: int
    n_max: int
    component_numbers: list
    product: int
    holds: bool


def verify_product_bound(classes: Sequence[SampledClass], m: MetricSpec, t: float,
                         max_rows: int = MAX_EXACT_ROWS,
                         budget_nodes: Optional[int] = None) -> ProductBoundReport:
    """Exact ``N(F_max, t)`` against ``prod_i N(F_i, t / k^(1/p))`` (radius ``t`` when ``p = inf``)."""
    k = len(classes)
    Fmax = k_fold_max(classes, MaxSpec())
    lhs = covering_number(Fmax, m, t, "exact", max_rows=max_rows, budget_nodes=budget_nodes).size
    tc = component_radius(t, k, m.p)
    comps = [covering_number(F, m, tc, "exact", max_rows=max_rows, budget_nodes=budget_nodes).size
             for F in classes]
    prod = math.prod(comps)
    return ProductBoundReport(m.p, t, k, lhs, comps, prod, lhs <= prod)


# -- Maurey nets -----------------------------------------------------------------

MAX_MAUREY_TERMS = 4
MAX_MAUREY_VECTORS = 25


@dataclass
class MaureyNet:
    points: np.ndarray
    terms: int
    radius: float
    scale: float

    @property
    def size(self) -> int:
        return self.points.shape[0]


def maurey_terms(r: float, t: float) -> int:
    return max(1, math.ceil((r / t) ** 2 - 1e-12))


def maurey_size_bound(m: int, r: float, t: float, c: float = 3.0) -> float:
    """``(c + c m t^2 / r^2) ^ ceil(r^2 / t^2)``."""
    return (c + c * m * t * t / (r * r)) ** maurey_terms(r, t)


def maurey_cover(X, r: float, t: float) -> MaureyNet:
    """Euclidean ``t``-net of ``absconv(r X)`` built from ``s``-term signed averages.

    With ``s = ceil(r^2/t^2)`` the net is every ``(r/s) * sum_j e_j x_{i_j}`` over
    multisets of size ``s`` drawn from ``{+x, -x : x in X} U {0}``.  Sampling
    ``s`` terms from the coefficient distribution of a target leaves expected
    squared error at most ``r^2 / s <= t^2``, so some net point lies within ``t``.
    Duplicate net points are merged.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[0] == 0:
        raise ValueError("X must be nonempty")
    if t <= 0 or r <= 0:
        raise ValueError("r and t must be positive")
    if X.shape[0] > MAX_MAUREY_VECTORS:
        raise ValueError(f"at most {MAX_MAUREY_VECTORS} generating vectors")
    s = maurey_terms(r, t)
    if s > MAX_MAUREY_TERMS:
        raise ValueError(f"ceil(r^2/t^2) = {s} exceeds {MAX_MAUREY_TERMS}")
    atoms = np.vstack([X, -X, np.zeros((1, X.shape[1]))])
    pts = []
    for combo in itertools.combinations_with_replacement(range(atoms.shape[0]), s):
        pts.append(atoms[list(combo)].sum(axis=0))
    P = np.array(pts) * (r / s)
    P = np.unique(np.round(P, 12), axis=0)
    return MaureyNet(P, s, t, r)


def sample_absconv(X, n: int, seed: int, r: float = 1.0) -> np.ndarray:
    """Random points of ``absconv(r X)``: signed Dirichlet weights scaled by a uniform total mass."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    rng = np.random.default_rng(seed)
    k = X.shape[0]
    alpha = rng.dirichlet(np.full(k, 0.5), size=n)
    signs = rng.choice((-1.0, 1.0), size=(n, k))
    mass = rng.uniform(0, 1, size=(n, 1)) ** 0.25
    return r * (alpha * signs * mass) @ X


def net_coverage(net: MaureyNet, targets: np.ndarray) -> np.ndarray:
    """Distance from each target to its nearest net point."""
    d2 = ((targets[:, None, :] - net.points[None, :, :]) ** 2).sum(axis=2)
    return np.sqrt(d2.min(axis=1))
