"""Finite function classes, partial concept classes, measures and the margin discretizer.

A :class:`SampledClass` is a real matrix whose rows are functions and whose
columns are domain points.  A :class:`PartialClass` is the same shape over the
alphabet ``{0, 1, STAR}``.  Both are immutable: the underlying arrays are
flagged read-only on construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

STAR = -1
"""Encoding of the undefined label inside :class:`PartialClass` arrays."""

STAR_JSON = "*"


class SchemaError(ValueError):
    """A class, measure or certificate file does not match the expected layout."""


def _labels(domain_labels, n):
    if domain_labels is None:
        return tuple(f"x{i}" for i in range(n))
    labels = tuple(str(x) for x in domain_labels)
    if len(labels) != n:
        raise SchemaError(f"{len(labels)} domain labels for {n} columns")
    return labels


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SampledClass:
    """A finite real-valued function class, ``values[f, x] = f(x)``."""

    values: np.ndarray
    domain_labels: tuple = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        try:
            v = np.asarray(self.values, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"values are not a rectangular real matrix: {exc}") from None
        if v.ndim == 1:
            v = v.reshape(1, -1)
        if v.ndim != 2:
            raise SchemaError("values must be a 2-d matrix (functions x points)")
        if v.shape[0] < 1 or v.shape[1] < 1:
            raise SchemaError("a class needs at least one function and one domain point")
        if not np.all(np.isfinite(v)):
            raise SchemaError("values must be finite")
        object.__setattr__(self, "values", _frozen(v))
        object.__setattr__(self, "domain_labels", _labels(self.domain_labels, v.shape[1]))

    @property
    def n_functions(self) -> int:
        return self.values.shape[0]

    @property
    def n_points(self) -> int:
        return self.values.shape[1]

    def __len__(self):
        return self.n_functions

    def __eq__(self, other):
        if not isinstance(other, SampledClass):
            return NotImplemented
        return (self.domain_labels == other.domain_labels
                and self.values.shape == other.values.shape
                and bool(np.array_equal(self.values, other.values)))

    __hash__ = None

    def with_values(self, values, **metadata) -> "SampledClass":
        meta = dict(self.metadata)
        meta.update(metadata)
        return SampledClass(values, self.domain_labels, meta)


@dataclass(frozen=True, eq=False)
class PartialClass:
    """A partial concept class over ``{0, 1, STAR}`` stored as an int8 matrix."""

    values: np.ndarray
    domain_labels: tuple = None

    def __post_init__(self):
        v = _parse_partial_values(self.values)
        object.__setattr__(self, "values", _frozen(v))
        object.__setattr__(self, "domain_labels", _labels(self.domain_labels, v.shape[1]))

    @property
    def n_functions(self) -> int:
        return self.values.shape[0]

    @property
    def n_points(self) -> int:
        return self.values.shape[1]

    def __len__(self):
        return self.n_functions

    def __eq__(self, other):
        if not isinstance(other, PartialClass):
            return NotImplemented
        return (self.domain_labels == other.domain_labels
                and bool(np.array_equal(self.values, other.values)))

    __hash__ = None

    @property
    def is_total(self) -> bool:
        return not bool(np.any(self.values == STAR))

    def to_lists(self) -> list:
        return [[STAR_JSON if v == STAR else int(v) for v in row] for row in self.values]


def _parse_partial_values(values) -> np.ndarray:
    if isinstance(values, np.ndarray) and values.dtype.kind in "iub":
        v = values.astype(np.int8)
    else:
        rows = [list(r) for r in values] if not isinstance(values, np.ndarray) else values.tolist()
        if not rows:
            raise SchemaError("a partial class needs at least one row")
        width = len(rows[0])
        out = np.empty((len(rows), width), dtype=np.int8)
        for i, row in enumerate(rows):
            if len(row) != width:
                raise SchemaError(f"ragged partial class: row {i} has {len(row)} entries, expected {width}")
            for j, e in enumerate(row):
                out[i, j] = _parse_label(e)
        v = out
    if v.ndim == 1:
        v = v.reshape(1, -1)
    if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
        raise SchemaError("partial class must be a nonempty 2-d matrix")
    if not np.all(np.isin(v, (0, 1, STAR))):
        raise SchemaError("partial class entries must be 0, 1 or '*'")
    return v


def _parse_label(e) -> int:
    if isinstance(e, str):
        if e == STAR_JSON:
            return STAR
        raise SchemaError(f"invalid partial label {e!r}")
    if isinstance(e, bool):
        raise SchemaError(f"invalid partial label {e!r}")
    if isinstance(e, (int, np.integer)) and int(e) in (0, 1):
        return int(e)
    if isinstance(e, (int, np.integer)) and int(e) == STAR:
        return STAR
    raise SchemaError(f"invalid partial label {e!r}")


@dataclass(frozen=True, eq=False)
class Measure:
    """Probability weights over the domain points."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64).ravel()
        if w.size == 0 or np.any(w < 0) or not np.all(np.isfinite(w)):
            raise SchemaError("measure weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise SchemaError(f"measure weights sum to {w.sum()!r}, not 1")
        object.__setattr__(self, "weights", _frozen(w))

    @classmethod
    def uniform(cls, n: int) -> "Measure":
        return cls(np.full(n, 1.0 / n))

    def __len__(self):
        return self.weights.size

    @property
    def support(self) -> np.ndarray:
        return self.weights > 0


@dataclass(frozen=True)
class DiscretizerSpec:
    gamma: float

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive, got {self.gamma!r}")


def _check_subset(S, n) -> np.ndarray:
    idx = np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.intp).ravel()
    if idx.size == 0:
        raise ValueError("subset must be nonempty")
    if np.any(idx < 0) or np.any(idx >= n):
        raise IndexError(f"subset {idx.tolist()} out of range for {n} points")
    return idx


def restrict(F, S):
    """Project a class onto the domain points ``S`` (duplicate rows are kept)."""
    idx = _check_subset(S, F.n_points)
    labels = tuple(F.domain_labels[i] for i in idx)
    if isinstance(F, PartialClass):
        return PartialClass(F.values[:, idx], labels)
    return SampledClass(F.values[:, idx], labels, dict(F.metadata))


def discretize_values(values: np.ndarray, gamma: float) -> np.ndarray:
    out = np.full(values.shape, STAR, dtype=np.int8)
    out[values <= -gamma] = 0
    out[values >= gamma] = 1
    return out


def discretize_class(F: SampledClass, spec) -> PartialClass:
    """Map ``v <= -gamma`` to 0, ``v >= gamma`` to 1 and everything in between to STAR."""
    if not isinstance(spec, DiscretizerSpec):
        spec = DiscretizerSpec(float(spec))
    return PartialClass(discretize_values(F.values, spec.gamma), F.domain_labels)


def dedup(F):
    """Drop repeated rows, keeping first occurrences in their original order."""
    _, first = np.unique(F.values, axis=0, return_index=True)
    keep = np.sort(first)
    if isinstance(F, PartialClass):
        return PartialClass(F.values[keep], F.domain_labels)
    return F.with_values(F.values[keep], dedup_kept=keep.tolist())


# -- serialization ----------------------------------------------------------

def class_to_dict(F) -> dict:
    out: dict[str, Any] = {"domain": list(F.domain_labels)}
    if isinstance(F, PartialClass):
        out["values"] = F.to_lists()
    else:
        out["values"] = F.values.tolist()
        if F.metadata:
            out["metadata"] = F.metadata
    return out


def class_from_dict(d: dict, partial: bool | None = None):
    if not isinstance(d, dict) or "values" not in d:
        raise SchemaError("class file must be an object with a 'values' matrix")
    rows = d["values"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise SchemaError("'values' must be a nonempty list of rows")
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise SchemaError(f"ragged matrix: row {i} has {len(r)} entries, expected {width}")
    if partial is None:
        partial = any(isinstance(e, str) for r in rows for e in r)
    domain = d.get("domain")
    if partial:
        return PartialClass(rows, domain)
    for r in rows:
        for e in r:
            if isinstance(e, bool) or not isinstance(e, (int, float)):
                raise SchemaError(f"non-numeric entry {e!r}")
    return SampledClass(np.array(rows, dtype=np.float64), domain, dict(d.get("metadata", {})))


def save_class(F, path) -> None:
    Path(path).write_text(json.dumps(class_to_dict(F), indent=1))


def load_class(path, partial: bool | None = None):
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON ({exc})") from None
    return class_from_dict(d, partial=partial)


def load_measure(path_or_dict, n: int) -> Measure:
    """Read ``{"weights": [...]}``; ``None`` or a missing key means uniform."""
    if path_or_dict is None:
        return Measure.uniform(n)
    d = path_or_dict
    if not isinstance(d, dict):
        d = json.loads(Path(d).read_text())
    if "weights" not in d:
        return Measure.uniform(n)
    m = Measure(d["weights"])
    if len(m) != n:
        raise SchemaError(f"measure has {len(m)} weights for {n} points")
    return m


def stack_rows(rows: Iterable[Sequence[float]], domain_labels=None, **metadata) -> SampledClass:
    return SampledClass(np.array(list(rows), dtype=np.float64), domain_labels, metadata)
