"""Closed-form upper bounds on fat(F_max) and numeric checks of the elementary facts behind them.

Only ``THM1`` and ``THM4_BLUMER`` carry explicit constants and are asserted
anywhere; the remaining evaluators take their universal constants as
parameters (default 1) and are reported as shapes.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

LN2 = math.log(2)

BOUND_IDS = ("THM1", "THM2", "THM3", "THM4_BLUMER", "THM4", "DUAN", "FAT_HYP", "LOG2X", "LOG2Y")
ASSERTED = ("THM1", "THM4_BLUMER")


def Log(x: float) -> float:
    """``log(max(e, x))``."""
    return math.log(max(math.e, x))


@dataclass(frozen=True)
class BoundParams:
    gamma: float = 1.0
    R: Optional[float] = None
    R_list: Optional[Sequence[float]] = None
    k: Optional[int] = None
    d: Optional[int] = None
    epsilon: Optional[float] = None
    D: Optional[float] = None
    C: float = 1.0
    c: float = 1.0
    A: Optional[float] = None

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.D is not None and self.D < 0:
            raise ValueError("D must be nonnegative")

    @property
    def aspect_ratio(self) -> float:
        return self._need("R") / self.gamma

    def _need(self, name):
        v = getattr(self, name)
        if v is None:
            raise ValueError(f"parameter {name!r} is required for this bound")
        return v


def evaluate_bound(bound_id: str, params: BoundParams) -> float:
    """Right-hand side of the named bound.

    ``THM2`` and ``DUAN`` take ``D`` as the sum of component fat dimensions
    measured at their own scales (see :func:`component_scale`).  ``LOG2X`` and
    ``LOG2Y`` evaluate ``3A log(3A)`` and ``5A log^2(18A)``.
    """
    p = params
    if bound_id == "THM1":
        D = p._need("D")
        return 0.0 if D == 0 else 25 * D * math.log(90 * D) ** 2
    if bound_id == "THM2":
        eps = p._need("epsilon")
        if not 0 < eps < LN2:
            raise ValueError("epsilon must lie in (0, log 2)")
        return p.C * p._need("D") * Log(p._need("R") * p._need("k") / p.gamma) ** (1 + eps)
    if bound_id == "THM3":
        Rs = p.R_list if p.R_list is not None else [p._need("R")] * p._need("k")
        k = len(Rs)
        return p.c * Log(k) / p.gamma ** 2 * sum(r * r for r in Rs)
    if bound_id == "THM4_BLUMER":
        k = p._need("k")
        return 2 * (p._need("d") + 1) * k * math.log(3 * k)
    if bound_id == "THM4":
        k = p._need("k")
        return p.c * p._need("d") * k * Log(k)
    if bound_id == "DUAN":
        return p.C * math.log(p._need("k") / p.gamma) * p._need("D")
    if bound_id == "FAT_HYP":
        return min(p._need("d") + 1, (3 * p._need("R") / p.gamma) ** 2)
    if bound_id == "LOG2X":
        A = p._need("A")
        return 3 * A * math.log(3 * A)
    if bound_id == "LOG2Y":
        A = p._need("A")
        return 5 * A * math.log(18 * A) ** 2
    raise ValueError(f"unknown bound id {bound_id!r}")


def component_scale(bound_id: str, params: BoundParams) -> float:
    """Scale at which component fat dimensions enter ``D``: ``c eps gamma`` (THM2), ``c gamma / sqrt k`` (DUAN)."""
    if bound_id == "THM2":
        return params.c * params._need("epsilon") * params.gamma
    if bound_id == "DUAN":
        return params.c * params.gamma / math.sqrt(params._need("k"))
    return params.gamma


def probe_rhs(k: int, fats: Sequence[int], c: float = 1.0) -> float:
    """``c Log(k) sum fat`` (probe only, never asserted)."""
    return c * Log(k) * sum(fats)


# -- elementary facts -------------------------------------------------------------

def _root_hi(g, lo: float) -> float:
    """Largest ``x >= lo`` with ``g(x) >= 0`` for a function positive then eventually negative."""
    hi = max(2.0, lo)
    while g(hi) >= 0:
        hi *= 2
    a, b = lo, hi
    for _ in range(200):
        mid = (a + b) / 2
        if g(mid) >= 0:
            a = mid
        else:
            b = mid
    return a


def check_elementary_facts(samples: int = 10_000, seed: int = 0, rtol: float = 1e-9) -> dict:
    """Random admissible tuples for the two log implications and the two Jensen-type inequalities.

    The ``log^(1+eps)`` inequality is sampled where ``x log^(1+eps)(u/x)`` is
    concave, i.e. ``1 <= v_i <= u e^-eps``; ``full_domain_violations``
    additionally counts failures over ``1 <= v_i <= u`` for the record.
    Violations are relative to the right-hand side.
    """
    rng = np.random.default_rng(seed)
    out = {}

    # x <= A log2 x  =>  x <= 3A log(3A)
    worst, hits = -np.inf, 0
    for _ in range(samples):
        A = math.exp(rng.uniform(0, math.log(1e4)))
        hi = _root_hi(lambda x: A * math.log2(x) - x, 1.0)
        x = rng.uniform(1.0, max(hi, 1.0))
        if x <= A * math.log2(x):
            hits += 1
            rhs = 3 * A * math.log(3 * A)
            worst = max(worst, (x - rhs) / rhs)
    out["log2x"] = {"max_violation": float(worst), "hypothesis_held": hits}

    # y <= A log2^2 y  =>  y <= 5A log^2(18A)
    worst, hits = -np.inf, 0
    for _ in range(samples):
        A = math.exp(rng.uniform(0, math.log(1e4)))
        hi = _root_hi(lambda y: A * math.log2(y) ** 2 - y, 1.0)
        y = rng.uniform(1.0, hi)
        if y <= A * math.log2(y) ** 2:
            hits += 1
            rhs = 5 * A * math.log(18 * A) ** 2
            worst = max(worst, (y - rhs) / rhs)
    out["log2y"] = {"max_violation": float(worst), "hypothesis_held": hits}

    # sum v log(u/v) <= (sum v) log(uk / sum v)
    worst = -np.inf
    for _ in range(samples):
        k = int(rng.integers(1, 9))
        u = math.exp(rng.uniform(-3, 6))
        v = np.exp(rng.uniform(-4, 5, size=k))
        lhs = float(np.sum(v * np.log(u / v)))
        s = v.sum()
        rhs = s * math.log(u * k / s)
        worst = max(worst, (lhs - rhs) / max(abs(rhs), 1e-300))
    out["xlog"] = {"max_violation": float(worst)}

    # sum v log^(1+eps)(u/v) <= (sum v) log^(1+eps)(uk / sum v)
    worst = -np.inf
    full_bad = 0
    for _ in range(samples):
        k = int(rng.integers(1, 9))
        eps = rng.uniform(0, LN2)
        u = rng.uniform(2, 1e3)
        v = rng.uniform(1, u * math.exp(-eps), size=k)
        worst = max(worst, _jensen_gap(v, u, k, eps))
        vf = rng.uniform(1, u, size=k)
        if _jensen_gap(vf, u, k, eps) > rtol:
            full_bad += 1
    out["xlog_eps"] = {"max_violation": float(worst), "full_domain_violations": full_bad}

    out["max_violation"] = max(out[key]["max_violation"] for key in ("log2x", "log2y", "xlog", "xlog_eps"))
    out["ok"] = out["max_violation"] <= rtol
    out["samples"], out["seed"] = samples, seed
    return out


def _jensen_gap(v, u, k, eps) -> float:
    lhs = float(np.sum(v * np.log(u / v) ** (1 + eps)))
    s = float(v.sum())
    rhs = s * math.log(u * k / s) ** (1 + eps)
    return (lhs - rhs) / max(abs(rhs), 1e-300)


# -- reports -----------------------------------------------------------------------

@dataclass
class BoundRow:
    instance_id: str
    k: int
    d: Optional[int]
    gamma: float
    fat_max: int
    fat_components: list
    rhs: dict = field(default_factory=dict)
    exact: bool = True
    probe: Optional[float] = None

    @property
    def slack(self) -> dict:
        return {b: (self.fat_max / v if v else (0.0 if self.fat_max == 0 else math.inf))
                for b, v in self.rhs.items()}

    def violations(self) -> list:
        return [b for b in ASSERTED if b in self.rhs and self.exact and self.fat_max > self.rhs[b]]


def bound_report(instances, params: BoundParams, ids: Sequence[str] = ("THM1",),
                 probe_c: float = 1.0) -> list:
    """One :class:`BoundRow` per instance ``(instance_id, fat_max DimResult, [component DimResult])``.

    ``D`` is the sum of component fat dimensions; ``probe`` is the
    ``c Log(k) sum fat`` column, recorded and never asserted.
    """
    rows = []
    for inst_id, fat_max, comps in instances:
        fats = [c.dimension for c in comps]
        k = len(fats)
        p = replace(params, D=sum(fats), k=k)
        rhs = {}
        for b in ids:
            try:
                rhs[b] = evaluate_bound(b, p)
            except ValueError:
                continue
        exact = fat_max.exact and all(c.exact for c in comps)
        rows.append(BoundRow(str(inst_id), k, p.d, p.gamma, fat_max.dimension, fats, rhs, exact,
                             probe_rhs(k, fats, probe_c)))
    return rows


def report_csv(rows: Sequence[BoundRow], ids: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance_id", "k", "d", "gamma", "fat_max", "fat_components"]
               + [f"rhs_{b}" for b in ids] + [f"slack_{b}" for b in ids]
               + ["probe_rhs", "probe_slack", "exact", "probe"])
    for r in rows:
        sl = r.slack
        probe_slack = r.fat_max / r.probe if r.probe else (0.0 if r.fat_max == 0 else math.inf)
        w.writerow([r.instance_id, r.k, "" if r.d is None else r.d, f"{r.gamma:g}", r.fat_max,
                    " ".join(map(str, r.fat_components))]
                   + [f"{r.rhs[b]:.6g}" if b in r.rhs else "" for b in ids]
                   + [f"{sl[b]:.6g}" if b in sl else "" for b in ids]
                   + [f"{r.probe:.6g}", f"{probe_slack:.6g}", int(r.exact), "PROBE"])
    return buf.getvalue()
