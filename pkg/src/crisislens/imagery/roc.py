"""Threshold calibration from labeled hash pairs via the ROC curve."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .phash import HASH_BITS, hamming


@dataclass(frozen=True)
class RocPoint:
    tau: int
    tpr: float
    fpr: float
    precision: float
    recall: float


def calibrate_threshold(
    pairs: Sequence[tuple[int, int, bool]],
) -> tuple[int, list[RocPoint]]:
    """Sweep tau over 0..64 and pick the Youden-J maximizer.

    ``pairs`` are (hash_a, hash_b, is_duplicate) labels; a pair counts as a
    detection at threshold tau when its Hamming distance is <= tau.  J is
    TPR - FPR; ties resolve to the smallest tau.  Needs at least one
    positive and one negative pair.
    """
    distances = [(hamming(a, b), dup) for a, b, dup in pairs]
    n_pos = sum(1 for _, dup in distances if dup)
    n_neg = len(distances) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("calibration needs both positive and negative pairs")
    curve: list[RocPoint] = []
    best_tau = 0
    best_j = float("-inf")
    for tau in range(HASH_BITS + 1):
        tp = sum(1 for d, dup in distances if dup and d <= tau)
        fp = sum(1 for d, dup in distances if not dup and d <= tau)
        tpr = tp / n_pos
        fpr = fp / n_neg
        precision = tp / (tp + fp) if (tp + fp) > 0 else 0.0
        curve.append(RocPoint(tau=tau, tpr=tpr, fpr=fpr, precision=precision, recall=tpr))
        j = tpr - fpr
        if j > best_j:
            best_j = j
            best_tau = tau
    return best_tau, curve
