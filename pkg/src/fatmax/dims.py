"""Exact fat-shattering, zero-shift fat-shattering and VC dimensions with certificates.

Subsets are searched level by level.  A subset of size ``m + 1`` is only
examined when every one of its ``m``-subsets is shattered (shattering is
inherited by subsets), and levels are enumerated in lexicographic order, so the
first shattered set at the top level is the lexicographically smallest maximum
shattered set.  Stopping early (subset cap or node budget) leaves a certified
lower bound.

Shifted shattering is decided without enumerating shifts.  On a finite class the
set ``S`` is shattered iff one can pick a row ``f_y`` per sign pattern ``y`` so that
at every ``i``::

    min{f_y(x_i) : y_i = +1} >= max{f_y(x_i) : y_i = -1} + 2 * gamma

and the shift is then the midpoint of that gap.  The witness search is a
backtracking search over patterns that tracks, per column, the interval of shifts
still compatible with the rows picked so far.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .core import STAR, PartialClass, SampledClass, SchemaError

SHIFTED = "shifted"
ZERO = "zero"
MAX_POINTS = 20
MAX_BITS = 62


class BudgetExceeded(RuntimeError):
    """Raised internally when a search runs past its node budget."""


# -- certificates -------------------------------------------------------------

def pattern_to_str(y) -> str:
    return "".join("+" if s > 0 else "-" for s in y)


def str_to_pattern(s: str) -> tuple:
    if not s or any(c not in "+-" for c in s):
        raise SchemaError(f"bad sign pattern {s!r}")
    return tuple(1 if c == "+" else -1 for c in s)


def gray_patterns(m: int) -> list:
    """All sign patterns of length ``m`` in reflected Gray-code order."""
    out = []
    for k in range(1 << m):
        g = k ^ (k >> 1)
        out.append(tuple(1 if (g >> i) & 1 else -1 for i in range(m)))
    return out


@dataclass(frozen=True)
class ShatterCertificate:
    """``subset`` is shattered around ``shift``; ``witnesses[y]`` is the row realizing pattern ``y``."""

    subset: tuple
    shift: tuple
    witnesses: dict
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "subset", tuple(int(i) for i in self.subset))
        object.__setattr__(self, "shift", tuple(float(r) for r in self.shift))
        object.__setattr__(self, "witnesses",
                           {tuple(int(s) for s in y): int(j) for y, j in self.witnesses.items()})
        if len(self.shift) != len(self.subset):
            raise ValueError("shift must have one entry per subset point")

    @property
    def size(self) -> int:
        return len(self.subset)

    def to_dict(self) -> dict:
        return {
            "subset": list(self.subset),
            "shift": list(self.shift),
            "witnesses": {pattern_to_str(y): j for y, j in sorted(self.witnesses.items())},
            "gamma": self.gamma,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ShatterCertificate":
        try:
            return cls(d["subset"], d["shift"],
                       {str_to_pattern(k): v for k, v in d["witnesses"].items()}, float(d["gamma"]))
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed certificate: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass
class SearchStats:
    subsets_examined: int = 0
    pruned: int = 0
    nodes: int = 0


@dataclass
class DimResult:
    """``exact=False`` means the search stopped early and ``dimension`` is a certified lower bound."""

    dimension: int
    certificate: Optional[ShatterCertificate] = None
    exact: bool = True
    stats: SearchStats = field(default_factory=SearchStats)
    subset: tuple = ()
    budget_exceeded: bool = False

    @property
    def lower_bound_only(self) -> bool:
        return not self.exact


def check_certificate(F: SampledClass, cert: ShatterCertificate, mode: str = SHIFTED,
                      atol: float = 0.0) -> bool:
    """Validate every pattern's witness against ``y_i (f(x_i) - r_i) >= gamma``.

    A missing pattern raises ``KeyError``.  ``atol`` loosens the inequality for
    witnesses produced by floating-point solves.
    """
    S = list(cert.subset)
    m = len(S)
    if m == 0:
        return True
    if len(set(S)) != m or min(S) < 0 or max(S) >= F.n_points:
        return False
    r = np.asarray(cert.shift, dtype=np.float64)
    if mode == ZERO and np.any(r != 0):
        raise ValueError("zero-mode certificate must carry an all-zero shift")
    for y in itertools.product((-1, 1), repeat=m):
        if y not in cert.witnesses:
            raise KeyError(f"no witness for pattern {pattern_to_str(y)}")
        j = cert.witnesses[y]
        if not 0 <= j < F.n_functions:
            return False
        margins = np.asarray(y) * (F.values[j, S] - r)
        if np.any(margins < cert.gamma - atol):
            return False
    return True


# -- bit helpers ----------------------------------------------------------------

def _bits(mat: np.ndarray) -> np.ndarray:
    """Pack each boolean row into an int64 bitmask (bit i <-> column i)."""
    weights = np.left_shift(np.int64(1), np.arange(mat.shape[1], dtype=np.int64))
    return (mat.astype(np.int64) * weights).sum(axis=1)


def _mask(S) -> int:
    out = 0
    for i in S:
        out |= 1 << i
    return out


def _subset_realizes_all(ones: np.ndarray, defined: np.ndarray, S) -> Optional[dict]:
    """Zero-mode / VC test: the fully defined rows on ``S`` must show all ``2^|S|`` labelings.

    Returns the first (lowest index) row per labeling, keyed by label bitmask
    over positions of ``S``.
    """
    M = _mask(S)
    ok = (defined & M) == M
    if np.count_nonzero(ok) < (1 << len(S)):
        return None
    rows = np.flatnonzero(ok)
    pats = ones[rows] & M
    uniq, first = np.unique(pats, return_index=True)
    if uniq.size < (1 << len(S)):
        return None
    witness = {}
    for p, k in zip(uniq.tolist(), first.tolist()):
        local = 0
        for pos, col in enumerate(S):
            if (p >> col) & 1:
                local |= 1 << pos
        witness[local] = int(rows[k])
    return witness


def _local_to_pattern(local: int, m: int) -> tuple:
    return tuple(1 if (local >> i) & 1 else -1 for i in range(m))


# -- shifted witness search -------------------------------------------------------

class _ShiftedSearch:
    """Backtracking over sign patterns with per-column shift intervals."""

    def __init__(self, V: np.ndarray, gamma: float, counter: list, budget: Optional[int]):
        self.V = V
        self.gamma = gamma
        self.m = V.shape[1]
        self.full = (1 << self.m) - 1
        self.hi_side = V - gamma
        self.lo_side = V + gamma
        self.counter = counter
        self.budget = budget
        self.pattern_bits = np.array(
            [((g ^ (g >> 1))) for g in range(1 << self.m)], dtype=np.int64)
        self.pattern_sign = ((self.pattern_bits[:, None] >> np.arange(self.m)) & 1).astype(bool)

    def _compat(self, a, b, remaining):
        plus_ok = _bits(self.hi_side >= a)
        minus_ok = _bits(self.lo_side <= b)
        s = self.pattern_bits[remaining][:, None]
        ns = (~s) & self.full
        return ((plus_ok[None, :] & s) == s) & ((minus_ok[None, :] & ns) == ns)

    def run(self):
        a = np.full(self.m, -np.inf)
        b = np.full(self.m, np.inf)
        assign = {}
        remaining = np.arange(1 << self.m)
        if self._solve(a, b, remaining, assign):
            return assign, a, b
        return None

    def _propagate(self, a, b, remaining):
        """Tighten the shift box until every remaining pattern's candidates agree with it.

        A pattern with ``y_i = +1`` will pin ``b_i`` at or below the largest
        ``f(x_i) - gamma`` among its candidates, and symmetrically for ``-1``.
        Returns ``(a, b, compat)`` or ``None`` when some pattern runs dry.
        """
        plus = self.pattern_sign[remaining]
        while True:
            compat = self._compat(a, b, remaining)
            if not compat.any(axis=1).all():
                return None
            up = np.where(compat[:, :, None], self.hi_side[None], -np.inf).max(axis=1)
            down = np.where(compat[:, :, None], self.lo_side[None], np.inf).min(axis=1)
            new_b = np.minimum(b, np.where(plus, up, np.inf).min(axis=0))
            new_a = np.maximum(a, np.where(plus, -np.inf, down).max(axis=0))
            if np.any(new_a > new_b):
                return None
            if np.array_equal(new_a, a) and np.array_equal(new_b, b):
                return a, b, compat
            a, b = new_a, new_b

    def _solve(self, a, b, remaining, assign) -> bool:
        if remaining.size == 0:
            return True
        self.counter[0] += 1
        if self.budget is not None and self.counter[0] > self.budget:
            raise BudgetExceeded
        state = self._propagate(a, b, remaining)
        if state is None:
            return False
        a, b, compat = state
        counts = compat.sum(axis=1)
        k = int(np.argmin(counts))
        p = int(remaining[k])
        cand = np.flatnonzero(compat[k])
        plus = self.pattern_sign[p]
        new_a = np.where(plus, a, np.maximum(a, self.lo_side[cand]))
        new_b = np.where(plus, np.minimum(b, self.hi_side[cand]), b)
        width = (new_b - new_a).min(axis=1)
        order = np.lexsort((cand, -width))
        rest = np.delete(remaining, k)
        for o in order:
            assign[p] = int(cand[o])
            if self._solve(new_a[o], new_b[o], rest, assign):
                return True
            del assign[p]
        return False


def _shifted_decision(values: np.ndarray, S, gamma: float, counter: list,
                      budget: Optional[int]) -> Optional[ShatterCertificate]:
    m = len(S)
    V = values[:, S]
    if np.any(V.max(axis=0) - V.min(axis=0) < 2 * gamma):
        return None
    uniq, first = np.unique(V, axis=0, return_index=True)
    if uniq.shape[0] < (1 << m):
        return None
    # keep original-row order so ties resolve to the lowest row index
    order = np.argsort(first)
    uniq, first = uniq[order], first[order]
    search = _ShiftedSearch(uniq, gamma, counter, budget)
    found = search.run()
    if found is None:
        return None
    assign, _, _ = found
    witnesses = {}
    lo = np.full(m, np.inf)
    hi = np.full(m, -np.inf)
    for p, j in assign.items():
        y = tuple(1 if s else -1 for s in search.pattern_sign[p])
        witnesses[y] = int(first[j])
        row = uniq[j]
        plus = search.pattern_sign[p]
        lo = np.where(plus, np.minimum(lo, row), lo)
        hi = np.where(plus, hi, np.maximum(hi, row))
    shift = (lo + hi) / 2
    return ShatterCertificate(tuple(S), tuple(shift), witnesses, gamma)


def _zero_decision(values, S, gamma, ones=None, defined=None) -> Optional[ShatterCertificate]:
    if ones is None:
        ones = _bits(values >= gamma)
        defined = ones | _bits(values <= -gamma)
    w = _subset_realizes_all(ones, defined, S)
    if w is None:
        return None
    m = len(S)
    witnesses = {_local_to_pattern(k, m): j for k, j in w.items()}
    return ShatterCertificate(tuple(S), (0.0,) * m, witnesses, gamma)


def shatter_decision(F: SampledClass, S, gamma: float, mode: str = SHIFTED,
                     budget: Optional[int] = None) -> Optional[ShatterCertificate]:
    """Return a certificate that ``S`` is ``gamma``-shattered, or ``None``."""
    S = sorted(int(i) for i in S)
    if not S:
        raise ValueError("subset must be nonempty")
    if S[0] < 0 or S[-1] >= F.n_points:
        raise IndexError(f"subset {S} out of range")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if mode == SHIFTED:
        return _shifted_decision(F.values, S, gamma, [0], budget)
    if mode == ZERO:
        return _zero_decision(F.values, S, gamma)
    raise ValueError(f"unknown mode {mode!r}")


# -- level-wise subset search ---------------------------------------------------

def _levelwise(columns: list, test: Callable, cap: int, stats: SearchStats):
    """Find the largest shattered subset of ``columns`` of size at most ``cap``.

    ``test(S)`` returns a certificate or ``None``.  Returns
    ``(size, certificate, hit_cap, out_of_budget)``.
    """
    best_size, best = 0, None
    level = [(c,) for c in columns]
    size = 1
    try:
        while level and size <= cap:
            shattered = []
            first = None
            for S in level:
                stats.subsets_examined += 1
                w = test(S)
                if w is not None:
                    shattered.append(S)
                    if first is None:
                        first = w
            if not shattered:
                break
            best_size, best = size, first
            if size == cap:
                return best_size, best, True, False
            level = _next_level(shattered, stats)
            size += 1
    except BudgetExceeded:
        return best_size, best, False, True
    return best_size, best, False, False


def _finish(cols, test, cap, user_cap, stats, counter) -> DimResult:
    size, cert, hit_cap, out_of_budget = _levelwise(cols, test, user_cap, stats)
    exact = not out_of_budget
    if exact and hit_cap and user_cap < cap:
        exact = not _has_extension(cols, cert, test)
    stats.nodes = counter[0]
    return DimResult(size, cert, exact, stats, cert.subset if cert else (), out_of_budget)


def _next_level(shattered: list, stats: SearchStats) -> list:
    known = set(shattered)
    out = []
    by_prefix: dict = {}
    for S in shattered:
        by_prefix.setdefault(S[:-1], []).append(S[-1])
    for prefix, tails in by_prefix.items():
        for i, t in enumerate(tails):
            for u in tails[i + 1:]:
                cand = prefix + (t, u)
                if all(cand[:j] + cand[j + 1:] in known for j in range(len(cand) - 2)):
                    out.append(cand)
                else:
                    stats.pruned += 1
    out.sort()
    return out


def _check_domain(n_points: int, max_points: int):
    if n_points > max_points or n_points > MAX_BITS:
        raise ValueError(f"exact search limited to {max_points} points, class has {n_points}")


def _row_cap(values) -> int:
    n = np.unique(values, axis=0).shape[0]
    return int(math.floor(math.log2(n))) if n > 0 else 0


def fat_dim(F: SampledClass, gamma: float, max_subset: Optional[int] = None,
            budget_nodes: Optional[int] = None, max_points: int = MAX_POINTS) -> DimResult:
    """Exact ``gamma``-fat-shattering dimension with a certificate for a largest shattered set."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    _check_domain(F.n_points, max_points)
    V = F.values
    stats = SearchStats()
    cols = [i for i in range(F.n_points) if V[:, i].max() - V[:, i].min() >= 2 * gamma]
    stats.pruned += F.n_points - len(cols)
    cap = min(len(cols), _row_cap(V))
    user_cap = cap if max_subset is None else min(cap, max_subset)
    counter = [0]

    def test(S):
        return _shifted_decision(V, list(S), gamma, counter, budget_nodes)

    return _finish(cols, test, cap, user_cap, stats, counter)


def faat_dim(F: SampledClass, gamma: float, max_subset: Optional[int] = None,
             budget_nodes: Optional[int] = None, max_points: int = MAX_POINTS) -> DimResult:
    """Exact ``gamma``-fat-shattering dimension with the shift pinned to zero."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    _check_domain(F.n_points, max_points)
    V = F.values
    stats = SearchStats()
    ones = _bits(V >= gamma)
    defined = ones | _bits(V <= -gamma)
    cols = [i for i in range(F.n_points)
            if V[:, i].max() >= gamma and V[:, i].min() <= -gamma]
    stats.pruned += F.n_points - len(cols)
    cap = min(len(cols), _row_cap(V))
    user_cap = cap if max_subset is None else min(cap, max_subset)
    counter = [0]

    def test(S):
        counter[0] += 1
        if budget_nodes is not None and counter[0] > budget_nodes:
            raise BudgetExceeded
        return _zero_decision(V, list(S), gamma, ones, defined)

    return _finish(cols, test, cap, user_cap, stats, counter)


def _has_extension(cols, cert, test) -> bool:
    # A cap below the true bound leaves the answer open unless no superset works.
    # One superset of the reported set suffices to show the cap was binding.
    S = set(cert.subset)
    for c in cols:
        if c not in S:
            try:
                if test(tuple(sorted(S | {c}))) is not None:
                    return True
            except BudgetExceeded:
                return True
    return False


def vc_dim_partial(P: PartialClass, max_subset: Optional[int] = None,
                   budget_nodes: Optional[int] = None, max_points: int = MAX_POINTS) -> DimResult:
    """VC dimension of a partial class: largest ``S`` with ``P(S)`` containing every 0/1 labeling.

    Works unchanged on total classes.  The certificate records the witness rows
    with pattern ``+1`` for label 1, ``-1`` for label 0, and a zero shift.
    """
    _check_domain(P.n_points, max_points)
    vals = P.values
    ones = _bits(vals == 1)
    defined = ones | _bits(vals == 0)
    stats = SearchStats()
    cols = [i for i in range(P.n_points) if np.any(vals[:, i] == 1) and np.any(vals[:, i] == 0)]
    stats.pruned += P.n_points - len(cols)
    # a row is fully defined on S for at most one labeling, so 2^|S| <= #rows
    cap = min(len(cols), _row_cap(vals))
    user_cap = cap if max_subset is None else min(cap, max_subset)
    counter = [0]

    def test(S):
        counter[0] += 1
        if budget_nodes is not None and counter[0] > budget_nodes:
            raise BudgetExceeded
        w = _subset_realizes_all(ones, defined, list(S))
        if w is None:
            return None
        m = len(S)
        return ShatterCertificate(S, (0.0,) * m, {_local_to_pattern(k, m): j for k, j in w.items()}, 1.0)

    return _finish(cols, test, cap, user_cap, stats, counter)


def vc_dim(values: np.ndarray) -> int:
    """VC dimension of a total {0,1} matrix (convenience wrapper)."""
    return vc_dim_partial(PartialClass(np.asarray(values, dtype=np.int8)),
                          max_points=max(MAX_POINTS, np.shape(values)[1])).dimension


# -- shift-scan oracle -------------------------------------------------------------

def midpoint_grid(column: np.ndarray) -> np.ndarray:
    """All midpoints ``(v + w) / 2`` of pairs of values in a column (``v = w`` allowed)."""
    u = np.unique(column)
    return np.unique(((u[:, None] + u[None, :]) / 2).ravel())


def _column_choices(column: np.ndarray, gamma: float):
    """Distinct (ones, zeros) row-bitmask pairs of ``column - r`` as ``r`` runs over the midpoint grid."""
    seen = {}
    for r in midpoint_grid(column):
        d = column - r
        key = (tuple(np.flatnonzero(d >= gamma)), tuple(np.flatnonzero(d <= -gamma)))
        if key not in seen:
            seen[key] = float(r)
    return [(r, set(k[0]), set(k[1])) for k, r in seen.items()]


def fat_via_shift_scan(F: SampledClass, gamma: float, max_shifts: int = 200_000) -> DimResult:
    """Fat-shattering dimension as the maximum of the zero-shift dimension of ``F - r``.

    ``r`` ranges over the per-column midpoint grid; shifts inducing identical
    margin labelings on a column are scanned once.  Independent of the gap
    reformulation used by :func:`fat_dim`.  If the grid product exceeds
    ``max_shifts`` the scan stops and the result is a lower bound.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    V = F.values
    n, m = V.shape
    choices = [_column_choices(V[:, i], gamma) for i in range(m)]
    total = math.prod(len(c) for c in choices)
    stats = SearchStats()
    best, best_cert = 0, None
    exact = True
    for count, combo in enumerate(itertools.product(*choices)):
        if count >= max_shifts:
            exact = False
            break
        stats.nodes += 1
        r = np.array([c[0] for c in combo])
        shifted = V - r
        size = best + 1
        while size <= m:
            hit = None
            for S in itertools.combinations(range(m), size):
                stats.subsets_examined += 1
                cert = _zero_decision(shifted, list(S), gamma)
                if cert is not None:
                    hit = ShatterCertificate(S, tuple(r[list(S)]), cert.witnesses, gamma)
                    break
            if hit is None:
                break
            best, best_cert = size, hit
            size += 1
        if best == m:
            break
    stats.pruned = total - stats.nodes
    return DimResult(best, best_cert, exact, stats, best_cert.subset if best_cert else ())


# -- zero-shift construction --------------------------------------------------------

class ZeroShift(NamedTuple):
    functions: SampledClass
    certificate: ShatterCertificate
    membership: list


def zero_shift_certificate(F: SampledClass, cert: ShatterCertificate) -> ZeroShift:
    """Build the half-differences ``(f_y - f_{-y}) / 2`` from a shifted certificate.

    Row ``k`` of the returned matrix is the function for the ``k``-th pattern in
    sorted order; it realizes that pattern with zero shift.  ``membership[k]``
    says whether the constructed row already occurs in ``F``.
    """
    if not check_certificate(F, cert, SHIFTED):
        raise ValueError("input certificate does not validate")
    patterns = sorted(cert.witnesses)
    rows = []
    for y in patterns:
        neg = tuple(-s for s in y)
        rows.append((F.values[cert.witnesses[y]] - F.values[cert.witnesses[neg]]) / 2)
    G = np.array(rows)
    cls = SampledClass(G, F.domain_labels, {"construction": "half-difference"})
    cert0 = ShatterCertificate(cert.subset, (0.0,) * cert.size,
                               {y: k for k, y in enumerate(patterns)}, cert.gamma)
    membership = [bool(np.any(np.all(F.values == g, axis=1))) for g in G]
    return ZeroShift(cls, cert0, membership)
