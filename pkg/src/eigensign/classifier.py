"""Two-level nearest-template classification in eigen space.

Level 1 compares eigenvector ``k`` of the query with eigenvector ``k`` of
every template by plain Euclidean distance and lets each eigen index vote
for its nearest template. Level 2 weights each of those distances by the
absolute eigenvalue gap, sums the weighted terms per template and picks
the minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .errors import EmptyDatabase, LengthMismatch, ShapeMismatch
from .features import FeatureSet

__all__ = [
    "Template",
    "DistanceRow",
    "ClassificationResult",
    "euclid",
    "weighted_term",
    "distance_rows",
    "level1_decision",
    "level2_decision",
    "classify",
    "LEVEL1_RULES",
]

LEVEL1_RULES = ("vote", "first")


@dataclass(frozen=True)
class Template:
    label: str
    features: FeatureSet
    source: str = ""

    def __post_init__(self):
        if not self.label or any(ch.isspace() for ch in self.label):
            raise ValueError(f"template label must be non-empty without whitespace: {self.label!r}")


@dataclass(frozen=True)
class DistanceRow:
    """Distances of one template to the query, one column per eigen index."""

    label: str
    per_vector: tuple
    weighted: tuple
    weighted_sum: float

    @classmethod
    def from_terms(cls, label, per_vector, weighted):
        per_vector = tuple(float(x) for x in per_vector)
        weighted = tuple(float(x) for x in weighted)
        if any(x < 0 for x in per_vector + weighted):
            raise ValueError("distances must be non-negative")
        return cls(label, per_vector, weighted, math.fsum(weighted))

    @property
    def per_vector_sum(self) -> float:
        return math.fsum(self.per_vector)


@dataclass(frozen=True)
class ClassificationResult:
    rows: List[DistanceRow]
    level1_label: str
    level2_label: str

    def best_row(self) -> DistanceRow:
        return min(self.rows, key=lambda r: r.weighted_sum)


def euclid(ev1, ev2) -> float:
    a = np.asarray(ev1, dtype=np.float64)
    b = np.asarray(ev2, dtype=np.float64)
    if a.shape != b.shape:
        raise LengthMismatch(f"vectors differ in length: {a.shape} vs {b.shape}")
    d = a - b
    return float(np.sqrt(np.dot(d, d)))


def weighted_term(ed: float, e1: float, e2: float) -> float:
    """Distance scaled by the eigenvalue gap: ``ed * |e1 - e2|``."""
    if ed < 0:
        raise ValueError("distance must be non-negative")
    return ed * abs(e1 - e2)


# --------------------------------------------------------------------------
# decision rules over distance tables
# --------------------------------------------------------------------------


def _ranked(indices, per_vector_sums, labels):
    """Order candidate row indices by (Σ per-vector distance, label, position)."""
    return sorted(indices, key=lambda i: (per_vector_sums[i], labels[i], i))


def _argmin_rows(column: np.ndarray, per_vector_sums, labels) -> int:
    tied = np.flatnonzero(column == column.min())
    return _ranked(tied.tolist(), per_vector_sums, labels)[0]


def level2_decision(rows: Sequence[DistanceRow]) -> str:
    """Label of the smallest weighted sum.

    Ties fall to the smaller Σ per-vector distance, then the smaller label.
    """
    if not rows:
        raise EmptyDatabase("no distance rows to decide on")
    labels = [r.label for r in rows]
    pv_sums = [r.per_vector_sum for r in rows]
    sums = np.array([r.weighted_sum for r in rows])
    return labels[_argmin_rows(sums, pv_sums, labels)]


def level1_decision(rows: Sequence[DistanceRow], rule: str = "vote") -> str:
    """Level-1 label from the plain eigenvector distances.

    ``vote``: each eigen index votes for the label of its nearest template;
    the plurality wins, ties going to the label holding the smallest
    Σ per-vector distance, then to the smaller label.
    ``first``: nearest template on the first eigenvector alone.
    """
    if not rows:
        raise EmptyDatabase("no distance rows to decide on")
    if rule not in LEVEL1_RULES:
        raise ValueError(f"unknown level-1 rule {rule!r}; expected one of {LEVEL1_RULES}")
    labels = [r.label for r in rows]
    pv_sums = [r.per_vector_sum for r in rows]
    table = np.array([r.per_vector for r in rows])
    if rule == "first":
        return labels[_argmin_rows(table[:, 0], pv_sums, labels)]

    votes = {}
    for k in range(table.shape[1]):
        winner = labels[_argmin_rows(table[:, k], pv_sums, labels)]
        votes[winner] = votes.get(winner, 0) + 1
    top = max(votes.values())
    contenders = [lab for lab, n in votes.items() if n == top]
    if len(contenders) == 1:
        return contenders[0]
    best_sum = {lab: min(s for s, l in zip(pv_sums, labels) if l == lab) for lab in contenders}
    return min(contenders, key=lambda lab: (best_sum[lab], lab))


# --------------------------------------------------------------------------
# scoring
# --------------------------------------------------------------------------


def stack_templates(db: Sequence[Template]):
    """Stack a template list into ``(values[T, k], vectors[T, k, n])`` arrays."""
    if not db:
        raise EmptyDatabase("template database is empty")
    shape = db[0].features.vectors.shape
    for t in db:
        if t.features.vectors.shape != shape:
            raise ShapeMismatch(
                f"template {t.label!r} has features of shape {t.features.vectors.shape}, expected {shape}"
            )
    values = np.stack([t.features.values for t in db])
    vectors = np.stack([t.features.vectors for t in db])
    return values, vectors


def score(query: FeatureSet, values: np.ndarray, vectors: np.ndarray):
    """Per-vector distances and weighted terms against stacked templates.

    Returns two ``(T, k)`` arrays.
    """
    if vectors.shape[1:] != query.vectors.shape:
        raise ShapeMismatch(
            f"query features have shape {query.vectors.shape}, templates {vectors.shape[1:]}"
        )
    diff = vectors - query.vectors[None, :, :]
    per_vector = np.sqrt(np.einsum("tkn,tkn->tk", diff, diff))
    weighted = per_vector * np.abs(query.values[None, :] - values)
    return per_vector, weighted


def distance_rows(query: FeatureSet, db: Sequence[Template]) -> List[DistanceRow]:
    values, vectors = stack_templates(db)
    per_vector, weighted = score(query, values, vectors)
    return [DistanceRow.from_terms(t.label, pv, w) for t, pv, w in zip(db, per_vector, weighted)]


def classify(query: FeatureSet, db: Sequence[Template], level1_rule: str = "vote") -> ClassificationResult:
    rows = distance_rows(query, db)
    return ClassificationResult(rows, level1_decision(rows, level1_rule), level2_decision(rows))
