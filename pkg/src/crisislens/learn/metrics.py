"""Classification evaluation: confusion matrix, per-class P/R/F1, accuracy."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass
class EvalReport:
    """Per-class precision/recall/F1 plus accuracy and averaged F1 scores.

    ``confusion[g, p]`` counts gold class ``g`` predicted as ``p``; rows sum
    to gold class support.  Precision, recall and F1 are defined as 0 when
    their denominator is 0.
    """

    class_names: tuple[str, ...]
    per_class: dict[str, tuple[float, float, float]]
    accuracy: float
    macro_f1: float
    weighted_f1: float
    confusion: np.ndarray

    def rows(self) -> list[tuple[str, float, float, float]]:
        return [(name, *self.per_class[name]) for name in self.class_names]

    def format_table(self) -> str:
        width = max(len(n) for n in self.class_names)
        lines = [f"{'class':<{width}}  P     R     F1"]
        for name, p, r, f1 in self.rows():
            lines.append(f"{name:<{width}}  {p:.2f}  {r:.2f}  {f1:.2f}")
        lines.append(f"accuracy={self.accuracy:.2f} macro_f1={self.macro_f1:.2f}")
        return "\n".join(lines)


def _safe_div(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def evaluate(
    pred: Sequence[int],
    gold: Sequence[int],
    class_names: Sequence[str],
) -> EvalReport:
    if len(pred) != len(gold):
        raise ValueError("pred and gold must have equal length")
    n_classes = len(class_names)
    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    for p, g in zip(pred, gold):
        confusion[g, p] += 1
    total = int(confusion.sum())
    per_class: dict[str, tuple[float, float, float]] = {}
    f1s: list[float] = []
    weighted = 0.0
    for cls, name in enumerate(class_names):
        tp = int(confusion[cls, cls])
        fp = int(confusion[:, cls].sum()) - tp
        fn = int(confusion[cls, :].sum()) - tp
        precision = _safe_div(tp, tp + fp)
        recall = _safe_div(tp, tp + fn)
        f1 = _safe_div(2 * precision * recall, precision + recall)
        per_class[name] = (precision, recall, f1)
        f1s.append(f1)
        weighted += f1 * int(confusion[cls, :].sum())
    accuracy = _safe_div(float(np.trace(confusion)), total)
    return EvalReport(
        class_names=tuple(class_names),
        per_class=per_class,
        accuracy=accuracy,
        macro_f1=sum(f1s) / n_classes if n_classes else 0.0,
        weighted_f1=_safe_div(weighted, total),
        confusion=confusion,
    )
