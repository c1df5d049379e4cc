"""Labeled feature datasets and stratified train/dev/test splitting."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..textprep import BowVector

logger = logging.getLogger(__name__)


@dataclass
class LabeledDataset:
    """Dense feature matrix plus integer class labels.

    Sparse bag-of-words inputs are densified on construction; at the corpus
    sizes this package targets (tens of thousands of rows, vocabulary kept
    in check by ``min_df``) a dense matrix is the simple, fast choice.
    """

    features: np.ndarray  # shape (n, d), float64
    labels: np.ndarray  # shape (n,), int64
    class_names: tuple[str, ...]

    def __post_init__(self) -> None:
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2:
            raise ValueError("features must be 2-D")
        if len(self.features) != len(self.labels):
            raise ValueError("features and labels must have equal length")
        if len(self.labels) and self.labels.min() < 0:
            raise ValueError("labels must be non-negative")
        if len(self.labels) and self.labels.max() >= len(self.class_names):
            raise ValueError("label out of range of class_names")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @classmethod
    def from_bow(
        cls,
        vectors: Sequence[BowVector],
        labels: Sequence[int],
        class_names: Sequence[str],
        n_features: int,
    ) -> "LabeledDataset":
        mat = np.zeros((len(vectors), n_features), dtype=np.float64)
        for row, vec in enumerate(vectors):
            for idx, count in vec.pairs:
                mat[row, idx] = count
        return cls(
            features=mat,
            labels=np.asarray(labels, dtype=np.int64),
            class_names=tuple(class_names),
        )

    def subset(self, indices: Sequence[int]) -> "LabeledDataset":
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(
            features=self.features[idx],
            labels=self.labels[idx],
            class_names=self.class_names,
        )


def split_dataset(
    data: LabeledDataset,
    ratios: tuple[float, float, float],
    seed: int,
) -> tuple[LabeledDataset, LabeledDataset, LabeledDataset]:
    """Stratified train/dev/test split.

    Within each class the shuffled items are cut into
    ``floor(ratio * n_class)`` sized parts, with the remainder handed out
    train-first (train, then dev, then test).  Classes with fewer than 3
    items go entirely to train with a warning.  Reproducible for a given
    seed.
    """
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    rng = np.random.default_rng(seed)
    train_idx: list[int] = []
    dev_idx: list[int] = []
    test_idx: list[int] = []
    for cls in range(len(data.class_names)):
        members = np.flatnonzero(data.labels == cls)
        if len(members) == 0:
            continue
        if len(members) < 3:
            logger.warning(
                "class %r has only %d item(s); all assigned to train",
                data.class_names[cls],
                len(members),
            )
            train_idx.extend(members.tolist())
            continue
        shuffled = members[rng.permutation(len(members))]
        n_c = len(shuffled)
        sizes = [int(r * n_c) for r in ratios]
        remainder = n_c - sum(sizes)
        for slot in range(remainder):
            sizes[slot % 3] += 1
        a, b = sizes[0], sizes[0] + sizes[1]
        train_idx.extend(shuffled[:a].tolist())
        dev_idx.extend(shuffled[a:b].tolist())
        test_idx.extend(shuffled[b:].tolist())
    return data.subset(train_idx), data.subset(dev_idx), data.subset(test_idx)
