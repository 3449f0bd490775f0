"""Corpus training, leave-one-out / hold-out evaluation and success-rate reports."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .classifier import DistanceRow, Template, level1_decision, level2_decision, score, stack_templates
from .config import PipelineConfig
from .errors import EmptyCorpus, PipelineError, PnmError, TooFewTemplates
from .imaging import load_image
from .model_store import TemplateDb
from .pipeline import features_of

__all__ = [
    "ClassTally",
    "EvalReport",
    "Skipped",
    "CorpusBuild",
    "scan_corpus",
    "build_db",
    "leave_one_out",
    "holdout",
    "format_report",
    "report_csv",
    "read_report_csv",
]

IMAGE_SUFFIXES = (".ppm", ".pbm", ".pnm")
OVERALL = "*"


@dataclass
class ClassTally:
    count: int = 0
    level1_correct: int = 0
    level2_correct: int = 0


@dataclass
class EvalReport:
    labels: List[str]
    per_class: Dict[str, ClassTally]
    # rows are true labels, columns predicted labels, both in ``labels`` order
    confusion_level2: np.ndarray
    mean_latency: float = 0.0

    @property
    def total(self) -> int:
        return sum(t.count for t in self.per_class.values())

    @property
    def overall_level1(self) -> float:
        return sum(t.level1_correct for t in self.per_class.values()) / self.total

    @property
    def overall_level2(self) -> float:
        return sum(t.level2_correct for t in self.per_class.values()) / self.total


@dataclass(frozen=True)
class Skipped:
    path: str
    error: str


@dataclass
class CorpusBuild:
    db: TemplateDb
    skipped: List[Skipped] = field(default_factory=list)
    # read + pipeline wall time per template, same order as db.templates
    seconds: List[float] = field(default_factory=list)


def scan_corpus(corpus_dir) -> List[Tuple[str, Path]]:
    """``(label, path)`` for every ``<label>/<sample>.ppm|pbm`` under ``corpus_dir``, sorted."""
    root = Path(corpus_dir)
    if not root.is_dir():
        raise EmptyCorpus(f"corpus directory {root} does not exist")
    found = []
    for label_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for path in sorted(label_dir.iterdir()):
            if path.is_file() and path.suffix.lower() in IMAGE_SUFFIXES:
                found.append((label_dir.name, path))
    if not found:
        raise EmptyCorpus(f"no .ppm/.pbm images found under {root}")
    return found


def build_db(corpus_dir, config: PipelineConfig = PipelineConfig()) -> CorpusBuild:
    """One template per corpus image; failing images are listed in ``skipped``."""
    build = CorpusBuild(TemplateDb(eigen_count=config.eigen_count, vector_len=config.crop_side))
    for label, path in scan_corpus(corpus_dir):
        start = time.perf_counter()
        try:
            feats = features_of(load_image(path), config)
        except (PipelineError, PnmError, OSError) as exc:
            build.skipped.append(Skipped(str(path), f"{type(exc).__name__}: {exc}"))
            continue
        build.seconds.append(time.perf_counter() - start)
        build.db.add(Template(label, feats, str(path)))
    return build


def _tally(labels, truths, level1, level2, latency) -> EvalReport:
    index = {lab: i for i, lab in enumerate(labels)}
    per_class = {lab: ClassTally() for lab in labels}
    confusion = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for truth, p1, p2 in zip(truths, level1, level2):
        tally = per_class[truth]
        tally.count += 1
        tally.level1_correct += p1 == truth
        tally.level2_correct += p2 == truth
        confusion[index[truth], index[p2]] += 1
    return EvalReport(labels, per_class, confusion, latency)


def _decide(query_index: int, candidates: np.ndarray, templates: Sequence[Template],
            values: np.ndarray, vectors: np.ndarray, rule: str) -> Tuple[str, str]:
    query = templates[query_index].features
    per_vector, weighted = score(query, values[candidates], vectors[candidates])
    rows = [
        DistanceRow.from_terms(templates[c].label, pv, w)
        for c, pv, w in zip(candidates, per_vector, weighted)
    ]
    return level1_decision(rows, rule), level2_decision(rows)


def _run(db: TemplateDb, queries, candidates_for, rule, pipeline_seconds) -> EvalReport:
    templates = db.templates
    values, vectors = stack_templates(templates)
    truths, p1s, p2s, seconds = [], [], [], []
    for q in queries:
        start = time.perf_counter()
        p1, p2 = _decide(q, candidates_for(q), templates, values, vectors, rule)
        elapsed = time.perf_counter() - start
        if pipeline_seconds is not None:
            elapsed += pipeline_seconds[q]
        truths.append(templates[q].label)
        p1s.append(p1)
        p2s.append(p2)
        seconds.append(elapsed)
    labels = sorted({t.label for t in templates})
    return _tally(labels, truths, p1s, p2s, float(np.mean(seconds)))


def leave_one_out(db: TemplateDb, level1_rule: str = "vote",
                  pipeline_seconds: Optional[Sequence[float]] = None) -> EvalReport:
    """Classify every template against all the others.

    ``pipeline_seconds`` (per template) is added to the per-query
    classification time so ``mean_latency`` covers the whole
    image-to-label path.
    """
    n = len(db.templates)
    if n < 2 or len(db.labels) < 2:
        raise TooFewTemplates(f"leave-one-out needs >= 2 templates and >= 2 labels, got {n} / {len(db.labels)}")
    everyone = np.arange(n)
    return _run(db, range(n), lambda q: everyone[everyone != q], level1_rule, pipeline_seconds)


def holdout(db: TemplateDb, per_class: int, level1_rule: str = "vote",
            pipeline_seconds: Optional[Sequence[float]] = None) -> EvalReport:
    """Hold out the last ``per_class`` templates of every label as queries."""
    if per_class < 1:
        raise ValueError("per_class must be >= 1")
    by_label: Dict[str, List[int]] = {}
    for i, t in enumerate(db.templates):
        by_label.setdefault(t.label, []).append(i)
    queries = sorted(i for idx in by_label.values() for i in idx[-per_class:])
    train = np.array(sorted(set(range(len(db.templates))) - set(queries)), dtype=np.intp)
    if train.size == 0 or len(by_label) < 2:
        raise TooFewTemplates("hold-out leaves no training templates")
    return _run(db, queries, lambda q: train, level1_rule, pipeline_seconds)


# --------------------------------------------------------------------------
# rendering
# --------------------------------------------------------------------------


def format_report(report: EvalReport, timing: bool = True, confusion: bool = False) -> str:
    """Aligned text table: one row per symbol plus the overall rates."""
    width = max([len("Symbol"), len("Overall")] + [len(lab) for lab in report.labels])
    head = f"{'Symbol':<{width}}  {'Images':>6}  {'Level-1 success':>15}  {'Level-2 success':>15}"
    lines = [head, "-" * len(head)]
    for lab in report.labels:
        t = report.per_class[lab]
        lines.append(
            f"{lab:<{width}}  {t.count:>6}  {t.level1_correct / t.count:>15.4f}  {t.level2_correct / t.count:>15.4f}"
        )
    lines.append("-" * len(head))
    lines.append(
        f"{'Overall':<{width}}  {report.total:>6}  {report.overall_level1:>15.4f}  {report.overall_level2:>15.4f}"
    )
    if confusion:
        cw = max([3, len(str(report.total))] + [len(lab) for lab in report.labels])
        lines.append("")
        lines.append("Level-2 confusion (rows: true, columns: predicted)")
        lines.append(" " * cw + "".join(f" {lab:>{cw}}" for lab in report.labels))
        for lab, row in zip(report.labels, report.confusion_level2):
            lines.append(f"{lab:>{cw}}" + "".join(f" {n:>{cw}}" for n in row))
    if timing:
        lines.append(f"mean latency: {report.mean_latency:.4f} s/image")
    return "\n".join(lines) + "\n"


_CSV_FIELDS = ["label", "count", "level1_correct", "level2_correct", "level1_rate", "level2_rate"]


def report_csv(report: EvalReport) -> str:
    """Machine-readable report; the final ``*`` row holds the totals."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_FIELDS)
    for lab in report.labels:
        t = report.per_class[lab]
        writer.writerow([lab, t.count, t.level1_correct, t.level2_correct,
                         repr(t.level1_correct / t.count), repr(t.level2_correct / t.count)])
    c1 = sum(t.level1_correct for t in report.per_class.values())
    c2 = sum(t.level2_correct for t in report.per_class.values())
    writer.writerow([OVERALL, report.total, c1, c2, repr(report.overall_level1), repr(report.overall_level2)])
    return buf.getvalue()


def read_report_csv(text: str) -> Dict[str, ClassTally]:
    """Per-label counts back out of :func:`report_csv` output (totals row dropped)."""
    out = {}
    for row in csv.DictReader(io.StringIO(text)):
        if row["label"] == OVERALL:
            continue
        out[row["label"]] = ClassTally(int(row["count"]), int(row["level1_correct"]), int(row["level2_correct"]))
    return out
