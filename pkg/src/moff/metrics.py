"""Confusion counts and classification reports for the OFF / NOT task.

Values are kept as exact fractions and rounded (half-up, two places) only
when rendered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from moff.data import NOT, OFF

ROW_ORDER = (NOT, OFF, "micro avg", "macro avg", "weighted avg")


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts indexed (gold, predicted)."""

    tp_not: int
    not_as_off: int
    off_as_not: int
    tp_off: int

    def __post_init__(self):
        if min(self.as_tuple()) < 0:
            raise ValueError("confusion counts must be non-negative")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return self.tp_not, self.not_as_off, self.off_as_not, self.tp_off

    @property
    def total(self) -> int:
        return sum(self.as_tuple())


@dataclass(frozen=True)
class ReportRow:
    precision: Fraction
    recall: Fraction
    f1: Fraction
    support: int


@dataclass(frozen=True)
class ClassificationReport:
    rows: dict[str, ReportRow]
    # classes that were never predicted; their precision is reported as 0
    ill_defined: tuple[str, ...] = field(default=())

    def __getitem__(self, key: str) -> ReportRow:
        return self.rows[key]

    @property
    def accuracy(self) -> Fraction:
        return self.rows["micro avg"].f1


def confusion(preds: Sequence[str], golds: Sequence[str]) -> ConfusionMatrix:
    if len(preds) != len(golds):
        raise ValueError(f"{len(preds)} predictions for {len(golds)} gold labels")
    if not golds:
        raise ValueError("no instances to score")
    counts = {(g, p): 0 for g in (NOT, OFF) for p in (NOT, OFF)}
    for p, g in zip(preds, golds):
        if (g, p) not in counts:
            raise ValueError(f"unexpected label pair gold={g!r} pred={p!r}")
        counts[g, p] += 1
    return ConfusionMatrix(counts[NOT, NOT], counts[NOT, OFF], counts[OFF, NOT], counts[OFF, OFF])


def _ratio(num: int, den: int) -> Fraction:
    return Fraction(num, den) if den else Fraction(0)


def _f1(p: Fraction, r: Fraction) -> Fraction:
    return 2 * p * r / (p + r) if p + r > 0 else Fraction(0)


def report(cm: ConfusionMatrix) -> ClassificationReport:
    total = cm.total
    if total == 0:
        raise ValueError("empty confusion matrix")
    per_class = {
        NOT: (cm.tp_not, cm.tp_not + cm.off_as_not, cm.tp_not + cm.not_as_off),
        OFF: (cm.tp_off, cm.tp_off + cm.not_as_off, cm.tp_off + cm.off_as_not),
    }
    rows = {}
    ill = []
    for label, (tp, predicted, support) in per_class.items():
        if predicted == 0:
            ill.append(label)
        p, r = _ratio(tp, predicted), _ratio(tp, support)
        rows[label] = ReportRow(p, r, _f1(p, r), support)
    acc = Fraction(cm.tp_not + cm.tp_off, total)
    rows["micro avg"] = ReportRow(acc, acc, acc, total)
    a, b = rows[NOT], rows[OFF]
    rows["macro avg"] = ReportRow((a.precision + b.precision) / 2, (a.recall + b.recall) / 2,
                                  (a.f1 + b.f1) / 2, total)

    def weighted(attr: str) -> Fraction:
        return (getattr(a, attr) * a.support + getattr(b, attr) * b.support) / total

    rows["weighted avg"] = ReportRow(weighted("precision"), weighted("recall"),
                                     weighted("f1"), total)
    return ClassificationReport(rows, tuple(ill))


def round_half_up(x: Fraction | float, places: int = 2) -> Fraction:
    scale = 10 ** places
    return Fraction(math.floor(Fraction(x) * scale + Fraction(1, 2)), scale)


def fmt2(x: Fraction | float) -> str:
    return f"{float(round_half_up(x)):.2f}"


def render_report(r: ClassificationReport) -> str:
    """Fixed-width table: class rows, then micro / macro / weighted averages."""
    width = max(len(k) for k in ROW_ORDER)
    head = f"{'':>{width}} {'precision':>9} {'recall':>9} {'f1-score':>9} {'support':>9}"
    lines = [head, ""]
    for key in ROW_ORDER:
        row = r.rows[key]
        lines.append(f"{key:>{width}} {fmt2(row.precision):>9} {fmt2(row.recall):>9} "
                     f"{fmt2(row.f1):>9} {row.support:>9}")
        if key == OFF:
            lines.append("")
    for label in r.ill_defined:
        lines.append(f"warning: precision for {label} is ill-defined (never predicted); set to 0.00")
    return "\n".join(lines) + "\n"


def report_tsv(r: ClassificationReport) -> str:
    """Unrounded values, one row per line: label, precision, recall, f1, support."""
    lines = ["row\tprecision\trecall\tf1\tsupport"]
    for key in ROW_ORDER:
        row = r.rows[key]
        lines.append(f"{key}\t{float(row.precision)!r}\t{float(row.recall)!r}\t"
                     f"{float(row.f1)!r}\t{row.support}")
    return "\n".join(lines) + "\n"


def weighted_f1(preds: Sequence[str], golds: Sequence[str]) -> float:
    return float(report(confusion(preds, golds)).rows["weighted avg"].f1)
