"""Disambiguation of partial concept classes.

A disambiguation assigns every partial row a total 0/1 row that agrees with it
wherever the partial row is defined.  Total rows are stored as the distinct
rows of a 0/1 matrix plus an assignment index per partial row.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import STAR, PartialClass
from .dims import BudgetExceeded

MAX_EXACT_POINTS = 5
MAX_EXACT_ROWS = 10
DEFAULT_EXACT_BUDGET = 2_000_000


@dataclass(frozen=True, eq=False)
class Disambiguation:
    total: np.ndarray
    assignment: tuple

    def __post_init__(self):
        t = np.asarray(self.total, dtype=np.int8)
        if t.ndim == 1:
            t = t.reshape(1, -1)
        if not np.all(np.isin(t, (0, 1))):
            raise ValueError("disambiguating rows must be total 0/1 rows")
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "total", t)
        object.__setattr__(self, "assignment", tuple(int(a) for a in self.assignment))

    @property
    def size(self) -> int:
        return int(np.unique(self.total, axis=0).shape[0])

    def as_class(self) -> PartialClass:
        return PartialClass(self.total)

    def to_dict(self) -> dict:
        return {"total": self.total.tolist(), "assignment": list(self.assignment)}

    @classmethod
    def from_dict(cls, d: dict) -> "Disambiguation":
        return cls(np.array(d["total"], dtype=np.int8), d["assignment"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def is_disambiguation(P: PartialClass, D: Disambiguation) -> bool:
    """Every partial row's assigned total row agrees with it on its defined entries.

    Extra total rows that disambiguate nothing are allowed.
    """
    if len(D.assignment) != P.n_functions or D.total.shape[1] != P.n_points:
        return False
    for row, a in zip(P.values, D.assignment):
        if not 0 <= a < D.total.shape[0]:
            return False
        g = D.total[a]
        defined = row != STAR
        if np.any(row[defined] != g[defined]):
            return False
    return True


def _vc_total(rows: list, n: int) -> int:
    """VC dimension of a set of total rows given as int bitmasks over ``n`` points."""
    best = 0
    for size in range(1, n + 1):
        if (1 << size) > len(rows):
            break
        hit = False
        for S in itertools.combinations(range(n), size):
            M = sum(1 << i for i in S)
            if len({r & M for r in rows}) == 1 << size:
                hit = True
                break
        if not hit:
            break
        best = size
    return best


def _completions(row: np.ndarray) -> list:
    """All 0/1 completions of a partial row, as bitmasks, in lexicographic order of the STAR fill."""
    stars = np.flatnonzero(row == STAR)
    base = sum(1 << int(i) for i in np.flatnonzero(row == 1))
    out = []
    for fill in itertools.product((0, 1), repeat=len(stars)):
        out.append(base | sum(1 << int(i) for i, b in zip(stars, fill) if b))
    return out


def _to_matrix(masks: list, n: int) -> np.ndarray:
    return np.array([[(m >> i) & 1 for i in range(n)] for m in masks], dtype=np.int8).reshape(-1, n)


def _pack(rows: list, n: int) -> Disambiguation:
    distinct = []
    index = {}
    assignment = []
    for m in rows:
        if m not in index:
            index[m] = len(distinct)
            distinct.append(m)
        assignment.append(index[m])
    return Disambiguation(_to_matrix(distinct, n), assignment)


def min_vc_disambiguation_exact(P: PartialClass, max_points: int = MAX_EXACT_POINTS,
                                max_rows: int = MAX_EXACT_ROWS,
                                budget_nodes: int = DEFAULT_EXACT_BUDGET):
    """Disambiguation of minimum VC dimension, by branch and bound over per-row completions.

    Ties go to fewer distinct rows, then to the lexicographically first choice of
    completions (rows in order, STAR filled 0 before 1).  Returns
    ``(Disambiguation, vc)``; raises :class:`BudgetExceeded` past the node
    budget, in which case :func:`greedy_disambiguation` is the fallback.
    """
    n = P.n_points
    if n > max_points or P.n_functions > max_rows:
        raise BudgetExceeded(f"exact search limited to {max_points} points and {max_rows} rows")
    from .dims import vc_dim_partial
    floor = vc_dim_partial(P).dimension
    options = [_completions(r) for r in P.values]
    best: list = [None, None]
    nodes = [0]

    def dfs(i, chosen, vc):
        nodes[0] += 1
        if nodes[0] > budget_nodes:
            raise BudgetExceeded("exact disambiguation node budget exhausted")
        distinct = len(set(chosen))
        key = (vc, distinct)
        if best[0] is not None and key >= best[0]:
            return
        if i == len(options):
            best[0], best[1] = key, list(chosen)
            return
        for c in options[i]:
            chosen.append(c)
            if c in chosen[:-1]:
                new_vc = vc
            else:
                new_vc = _vc_total(list(set(chosen)), n)
            dfs(i + 1, chosen, new_vc)
            chosen.pop()
            if best[0] is not None and best[0] == (floor, 1):
                return

    dfs(0, [], 0)
    D = _pack(best[1], n)
    return D, best[0][0]


def greedy_disambiguation(P: PartialClass) -> Disambiguation:
    """Complete rows in order, reusing the first compatible total row when one exists.

    Otherwise each STAR is filled with the majority defined label of its column
    over the whole partial class (0 on ties, including all-STAR columns).
    """
    vals = P.values
    n = P.n_points
    ones = (vals == 1).sum(axis=0)
    zeros = (vals == 0).sum(axis=0)
    fill = (ones > zeros).astype(np.int8)
    rows: list = []
    for row in vals:
        defined = row != STAR
        for m in rows:
            g = _to_matrix([m], n)[0]
            if np.all(g[defined] == row[defined]):
                rows.append(m)
                break
        else:
            g = np.where(defined, row, fill)
            rows.append(sum(1 << i for i in range(n) if g[i]))
    return _pack(rows, n)


def singleton_disambiguation(P: PartialClass) -> Disambiguation:
    """One total row serving every partial row of a VC-dimension-0 class.

    Each column takes the unique label it carries (all-STAR columns go to 0).
    A column carrying both labels is shattered, so the precondition fails.
    """
    vals = P.values
    has1 = np.any(vals == 1, axis=0)
    has0 = np.any(vals == 0, axis=0)
    if np.any(has0 & has1):
        bad = np.flatnonzero(has0 & has1).tolist()
        raise ValueError(f"class has VC dimension >= 1 (columns {bad} carry both labels)")
    g = has1.astype(np.int8)
    return Disambiguation(g.reshape(1, -1), [0] * P.n_functions)


def disambiguation_vc(D: Disambiguation) -> int:
    n = D.total.shape[1]
    masks = list({sum(1 << i for i in range(n) if r[i]) for r in D.total})
    return _vc_total(masks, n)


def size_bound_sharp(n_points: int, d: int) -> float:
    """``(|X|+1)^((d+1) log2|X| + 2)``, the existence bound on disambiguation size."""
    return (n_points + 1) ** ((d + 1) * math.log2(n_points) + 2)


def size_bound_simple(n_points: int, d: int) -> float:
    """``|X|^(5 d log2|X|)``, valid for ``d > 0`` and ``|X| > 1``."""
    if d <= 0 or n_points <= 1:
        raise ValueError("the simplified size bound needs d > 0 and more than one point")
    return n_points ** (5 * d * math.log2(n_points))


@dataclass
class SizeCheck:
    n_points: int
    vc_partial: int
    vc_disambiguation: int
    size: int
    bound: float
    holds: bool


def size_check(P: PartialClass, D: Optional[Disambiguation] = None) -> SizeCheck:
    """Compare a (by default exact-minimal) disambiguation's size to ``|X|^(5 d log2|X|)``."""
    from .dims import vc_dim_partial
    d = vc_dim_partial(P).dimension
    vcD = None
    if D is None:
        D, vcD = min_vc_disambiguation_exact(P)
    if vcD is None:
        vcD = disambiguation_vc(D)
    bound = size_bound_simple(P.n_points, d)
    return SizeCheck(P.n_points, d, vcD, D.size, bound, D.size <= bound)
