"""Versioned line-oriented text format for trained template databases.

::

    EIGENSIGN 1
    DIMS <eigen_count> <vector_len>
    LABEL <symbol> <source>
    PAIR <value> <c0> <c1> ... <c(n-1)>     (eigen_count times per LABEL)

Reals are written with ``repr`` (shortest round-trip form), so
``load_db(save_db(db)) == db`` holds bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

from .classifier import Template
from .errors import BadMagic, ModelShapeMismatch, NormViolation, OrderViolation, VersionUnsupported, ShapeMismatch
from .features import FeatureSet

__all__ = ["TemplateDb", "save_db", "load_db", "FORMAT_VERSION", "MAGIC"]

MAGIC = "EIGENSIGN"
FORMAT_VERSION = 1
NORM_TOL = 1e-9


@dataclass
class TemplateDb:
    eigen_count: int = 5
    vector_len: int = 50
    templates: List[Template] = field(default_factory=list)
    version: int = FORMAT_VERSION

    def __post_init__(self):
        for t in self.templates:
            self._check(t)

    def _check(self, t: Template):
        if t.features.vectors.shape != (self.eigen_count, self.vector_len):
            raise ShapeMismatch(
                f"template {t.label!r} has features of shape {t.features.vectors.shape}, "
                f"database expects ({self.eigen_count}, {self.vector_len})"
            )

    def add(self, template: Template) -> None:
        self._check(template)
        self.templates.append(template)

    @property
    def labels(self) -> List[str]:
        """Distinct labels in first-seen order."""
        return list(dict.fromkeys(t.label for t in self.templates))

    def __len__(self):
        return len(self.templates)

    def __iter__(self):
        return iter(self.templates)

    def __eq__(self, other):
        if not isinstance(other, TemplateDb):
            return NotImplemented
        return (
            (self.version, self.eigen_count, self.vector_len) == (other.version, other.eigen_count, other.vector_len)
            and self.templates == other.templates
        )


def _fmt(x: float) -> str:
    return repr(float(x))


def save_db(db: TemplateDb) -> bytes:
    lines = [f"{MAGIC} {db.version}", f"DIMS {db.eigen_count} {db.vector_len}"]
    for t in db.templates:
        source = " ".join(t.source.split()) if t.source else "-"
        lines.append(f"LABEL {t.label} {source}")
        for value, vector in zip(t.features.values, t.features.vectors):
            lines.append("PAIR " + " ".join([_fmt(value)] + [_fmt(c) for c in vector]))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _floats(tokens, lineno):
    try:
        return [float(tok) for tok in tokens]
    except ValueError as exc:
        raise ModelShapeMismatch(f"bad number: {exc}", lineno) from None


def load_db(data: bytes) -> TemplateDb:
    """Parse and validate a model file.

    Rejects bad magic, unknown versions, wrong vector shapes, non-unit
    eigenvectors and unsorted eigenvalues, naming the offending line.
    """
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    if not lines:
        raise BadMagic("empty model file", 1)
    head = lines[0].split()
    if not head or head[0] != MAGIC:
        raise BadMagic(f"expected '{MAGIC} <version>' header", 1)
    if len(head) != 2 or not head[1].isdigit():
        raise BadMagic("malformed version field", 1)
    version = int(head[1])
    if version != FORMAT_VERSION:
        raise VersionUnsupported(f"format version {version} is not supported (expected {FORMAT_VERSION})", 1)

    if len(lines) < 2:
        raise ModelShapeMismatch("missing DIMS line", 2)
    dims = lines[1].split()
    if len(dims) != 3 or dims[0] != "DIMS" or not (dims[1].isdigit() and dims[2].isdigit()):
        raise ModelShapeMismatch("expected 'DIMS <eigen_count> <vector_len>'", 2)
    eigen_count, vector_len = int(dims[1]), int(dims[2])
    if eigen_count < 1 or vector_len < 1:
        raise ModelShapeMismatch("dimensions must be positive", 2)

    db = TemplateDb(eigen_count=eigen_count, vector_len=vector_len, version=version)
    i = 2
    while i < len(lines):
        lineno = i + 1
        parts = lines[i].split(maxsplit=2)
        if not parts or parts[0] != "LABEL" or len(parts) < 2:
            raise ModelShapeMismatch("expected 'LABEL <symbol> <source>'", lineno)
        label = parts[1]
        source = parts[2] if len(parts) > 2 else ""
        if source == "-":
            source = ""
        values, vectors = [], []
        for k in range(eigen_count):
            i += 1
            lineno = i + 1
            if i >= len(lines):
                raise ModelShapeMismatch(f"template {label!r} ends after {k} of {eigen_count} PAIR lines", lineno)
            tokens = lines[i].split()
            if not tokens or tokens[0] != "PAIR":
                raise ModelShapeMismatch(f"expected PAIR line {k + 1} of {eigen_count} for {label!r}", lineno)
            nums = _floats(tokens[1:], lineno)
            if len(nums) != vector_len + 1:
                raise ModelShapeMismatch(
                    f"PAIR has {len(nums) - 1} vector components, expected {vector_len}", lineno
                )
            value, vec = nums[0], np.array(nums[1:])
            if not np.all(np.isfinite(nums)):
                raise ModelShapeMismatch("non-finite number", lineno)
            norm = float(np.linalg.norm(vec))
            if abs(norm - 1.0) > NORM_TOL:
                raise NormViolation(f"eigenvector norm {norm!r} is not 1", lineno)
            if values and value > values[-1]:
                raise OrderViolation("eigenvalues must be non-increasing", lineno)
            values.append(value)
            vectors.append(vec)
        db.add(Template(label, FeatureSet(np.array(values), np.array(vectors)), source))
        i += 1
    return db
