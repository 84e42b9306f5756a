"""Precision, recall, and F-measure against gold labels.

Undefined metrics (zero denominators) raise instead of silently reporting 0,
so an empty run fails loudly rather than looking merely bad.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import GoldFileError, UndefinedMetricError
from .ie import ExtractedPair


@dataclass(frozen=True)
class EvalCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn) < 0:
            raise ValueError("counts must be non-negative")


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f_measure: float
    beta: float = 1.0


def f_measure(precision: float, recall: float, beta: float = 1.0) -> float:
    """(beta^2 + 1) * P * R / (P + beta^2 * R)."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    denominator = precision + beta * beta * recall
    if denominator == 0.0:
        raise UndefinedMetricError("precision and recall are both zero")
    return (beta * beta + 1.0) * precision * recall / denominator


def metrics_from_rates(precision: float, recall: float, beta: float = 1.0) -> Metrics:
    return Metrics(
        precision=precision,
        recall=recall,
        f_measure=f_measure(precision, recall, beta),
        beta=beta,
    )


def compute_metrics(counts: EvalCounts, beta: float = 1.0) -> Metrics:
    if counts.tp + counts.fp == 0:
        raise UndefinedMetricError("no items were extracted; precision undefined")
    if counts.tp + counts.fn == 0:
        raise UndefinedMetricError("gold set is empty; recall undefined")
    precision = counts.tp / (counts.tp + counts.fp)
    recall = counts.tp / (counts.tp + counts.fn)
    return metrics_from_rates(precision, recall, beta)


def normalize_value(value: str) -> str:
    """Trim, lowercase, collapse whitespace, strip trailing punctuation."""
    collapsed = re.sub(r"\s+", " ", value.strip().lower())
    return collapsed.rstrip(".,;:")


@dataclass(frozen=True)
class GoldEntry:
    doc_id: str
    class_id: str
    value: str


def load_gold(path: str | Path) -> list[GoldEntry]:
    """Gold file: tab-separated ``doc_id  class_id  value`` per line."""
    entries = []
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 3:
            raise GoldFileError(f"{path}:{lineno}: expected 'doc_id<TAB>class_id<TAB>value'")
        entries.append(
            GoldEntry(doc_id=parts[0].strip(), class_id=parts[1].strip(), value=parts[2].strip())
        )
    return entries


def score_pairs(extracted: list[ExtractedPair], gold: list[GoldEntry]) -> EvalCounts:
    """Set comparison on (doc, class, normalized value).

    Pairs still pending manual review carry no value and are not scored.
    Each gold entry can satisfy at most one extracted pair.
    """
    remaining: dict[tuple[str, str], list[str]] = {}
    for entry in gold:
        remaining.setdefault((entry.doc_id, entry.class_id), []).append(
            normalize_value(entry.value)
        )
    tp = fp = 0
    for pair in sorted(
        extracted, key=lambda p: (p.hit.doc_id, p.hit.span.start, p.hit.class_id)
    ):
        if pair.method == "manual_pending":
            continue
        key = (pair.hit.doc_id, pair.hit.class_id)
        value = normalize_value(pair.value_text)
        bucket = remaining.get(key, [])
        if value in bucket:
            bucket.remove(value)
            tp += 1
        else:
            fp += 1
    fn = sum(len(bucket) for bucket in remaining.values())
    return EvalCounts(tp=tp, fp=fp, fn=fn)
