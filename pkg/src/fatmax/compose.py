"""Class-level operators: k-fold maximum, shift, scale, sign thresholding and hinge loss."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import PartialClass, SampledClass

FULL = "full"
SAMPLED = "sampled"
DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class MaxSpec:
    """How to pick tuples ``(f_1, ..., f_k)`` for :func:`k_fold_max`.

    ``full`` enumerates the whole cross product in lexicographic tuple order.
    ``sampled`` draws ``count`` distinct tuples with ``seed``; any inequality
    verified on a sampled max class is only a lower-bound statement about the
    full one.
    """

    mode: str = FULL
    cap: int = DEFAULT_CAP
    count: Optional[int] = None
    seed: Optional[int] = None
    dedup: bool = False

    def __post_init__(self):
        if self.mode not in (FULL, SAMPLED):
            raise ValueError(f"unknown max mode {self.mode!r}")
        if self.mode == SAMPLED and (self.count is None or self.seed is None):
            raise ValueError("sampled mode needs both count and seed")

    def to_dict(self) -> dict:
        return {"mode": self.mode, "cap": self.cap, "count": self.count,
                "seed": self.seed, "dedup": self.dedup}

    @classmethod
    def from_dict(cls, d: dict) -> "MaxSpec":
        return cls(**{k: d[k] for k in ("mode", "cap", "count", "seed", "dedup") if k in d})


def _same_domain(classes: Sequence[SampledClass]):
    if not classes:
        raise ValueError("need at least one class")
    n = classes[0].n_points
    for F in classes[1:]:
        if F.n_points != n:
            raise ValueError(f"domain mismatch: {F.n_points} vs {n} points")


def k_fold_max(classes: Sequence[SampledClass], spec: MaxSpec = MaxSpec()) -> SampledClass:
    """Pointwise maxima ``x -> max_i f_i(x)``, one row per chosen tuple.

    ``metadata["tuples"]`` records the component row indices of every output row.
    """
    _same_domain(classes)
    sizes = [F.n_functions for F in classes]
    total = math.prod(sizes)
    if spec.mode == FULL:
        if total > spec.cap:
            raise ValueError(f"cross product has {total} tuples, cap is {spec.cap}")
        tuples = np.indices(sizes).reshape(len(sizes), -1).T
    else:
        rng = np.random.default_rng(spec.seed)
        count = min(spec.count, total)
        flat = np.sort(rng.choice(total, size=count, replace=False))
        tuples = np.stack(np.unravel_index(flat, sizes), axis=1)
    out = classes[0].values[tuples[:, 0]]
    for i in range(1, len(classes)):
        out = np.maximum(out, classes[i].values[tuples[:, i]])
    meta = {"operator": "k_fold_max", "k": len(classes), "spec": spec.to_dict(),
            "tuples": tuples.tolist()}
    if spec.dedup:
        _, first = np.unique(out, axis=0, return_index=True)
        keep = np.sort(first)
        out = out[keep]
        meta["tuples"] = tuples[keep].tolist()
    return SampledClass(out, classes[0].domain_labels, meta)


def shift_class(F: SampledClass, r) -> SampledClass:
    """``F - r``: subtract ``r[x]`` from every function at point ``x``."""
    r = np.broadcast_to(np.asarray(r, dtype=np.float64), (F.n_points,))
    return F.with_values(F.values - r)


def scale_class(F: SampledClass, lam: float) -> SampledClass:
    return F.with_values(F.values * lam)


def sign_threshold_class(F: SampledClass) -> PartialClass:
    """Entrywise ``1[f(x) >= 0]`` as a total 0/1 class."""
    return PartialClass((F.values >= 0).astype(np.int8), F.domain_labels)


def boolean_max(classes: Sequence[PartialClass]) -> PartialClass:
    """Full cross-product OR of total 0/1 classes (the max of indicator classes)."""
    sizes = [P.n_functions for P in classes]
    tuples = np.indices(sizes).reshape(len(sizes), -1).T
    out = classes[0].values[tuples[:, 0]]
    for i in range(1, len(classes)):
        out = np.maximum(out, classes[i].values[tuples[:, i]])
    return PartialClass(out, classes[0].domain_labels)


def label_flip_class(F: SampledClass, labels) -> SampledClass:
    """``(x, y) -> y f(x)`` on the label-augmented domain."""
    y = _labels(labels, F.n_points)
    dom = tuple(f"({d},{int(s):+d})" for d, s in zip(F.domain_labels, y))
    return SampledClass(F.values * y, dom, {"labels": y.astype(int).tolist()})


def hinge_loss_class(F: SampledClass, labels) -> SampledClass:
    """``(x, y) -> max{0, 1 - y f(x)}`` with one label per domain point."""
    y = _labels(labels, F.n_points)
    dom = tuple(f"({d},{int(s):+d})" for d, s in zip(F.domain_labels, y))
    return SampledClass(np.maximum(0.0, 1.0 - F.values * y), dom,
                        {"labels": y.astype(int).tolist(), "operator": "hinge"})


def _labels(labels, n) -> np.ndarray:
    y = np.asarray(labels, dtype=np.float64).ravel()
    if y.size != n or not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be +1/-1, one per domain point")
    return y
