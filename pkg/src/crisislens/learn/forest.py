"""Random forests over dense feature matrices, with lossless JSON persistence."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dataset import LabeledDataset
from .tree import DecisionTree, train_decision_tree

FORMAT_VERSION = 1
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class ForestParams:
    """Training knobs; ``max_features=None`` means ceil(sqrt(n_features))."""

    n_trees: int = 200
    max_features: Optional[int] = None
    min_leaf: int = 1
    max_depth: Optional[int] = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.max_features is not None and self.max_features < 1:
            raise ValueError("max_features must be >= 1")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")

    def resolve_max_features(self, n_features: int) -> int:
        if self.max_features is not None:
            return min(self.max_features, n_features)
        return max(1, min(n_features, math.ceil(math.sqrt(n_features))))


@dataclass
class ForestModel:
    trees: list[DecisionTree]
    class_names: tuple[str, ...]
    params: ForestParams
    n_features: int

    def to_json(self) -> str:
        obj = {
            "format_version": FORMAT_VERSION,
            "kind": "random_forest",
            "class_names": list(self.class_names),
            "n_features": self.n_features,
            "params": {
                "n_trees": self.params.n_trees,
                "max_features": self.params.max_features,
                "min_leaf": self.params.min_leaf,
                "max_depth": self.params.max_depth,
                "seed": self.params.seed,
            },
            "trees": [t.to_dict() for t in self.trees],
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "ForestModel":
        obj = json.loads(text)
        if obj.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported model format: {obj.get('format_version')}")
        p = obj["params"]
        return cls(
            trees=[DecisionTree.from_dict(t) for t in obj["trees"]],
            class_names=tuple(obj["class_names"]),
            params=ForestParams(
                n_trees=p["n_trees"],
                max_features=p["max_features"],
                min_leaf=p["min_leaf"],
                max_depth=p["max_depth"],
                seed=p["seed"],
            ),
            n_features=obj["n_features"],
        )

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "ForestModel":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def train_random_forest(data: LabeledDataset, params: ForestParams) -> ForestModel:
    """Train ``n_trees`` trees, each on a seeded bootstrap sample.

    Tree ``i`` draws its bootstrap indices and per-node feature subsets from
    an RNG seeded with ``seed + i``, so retraining with identical data and
    params yields a byte-identical serialized model.
    """
    if data.n == 0:
        raise ValueError("cannot train a forest on an empty dataset")
    k = params.resolve_max_features(data.n_features)
    trees: list[DecisionTree] = []
    for i in range(params.n_trees):
        rng = np.random.default_rng((params.seed + i) & _SEED_MASK)
        boot = rng.integers(0, data.n, size=data.n)
        trees.append(
            train_decision_tree(
                features=data.features[boot],
                labels=data.labels[boot],
                n_classes=len(data.class_names),
                max_features=k,
                min_leaf=params.min_leaf,
                max_depth=params.max_depth,
                rng=rng,
            )
        )
    return ForestModel(
        trees=trees,
        class_names=data.class_names,
        params=params,
        n_features=data.n_features,
    )


def predict(model: ForestModel, row: np.ndarray) -> tuple[int, float]:
    """Majority vote over trees; ties break to the lowest class index.

    Returns (class index, winning vote fraction).
    """
    row = np.asarray(row, dtype=np.float64)
    votes = [0] * len(model.class_names)
    for tree in model.trees:
        votes[tree.vote(row)] += 1
    best = 0
    for cls in range(1, len(votes)):
        if votes[cls] > votes[best]:
            best = cls
    return best, votes[best] / len(model.trees)


def predict_batch(model: ForestModel, rows: np.ndarray) -> list[tuple[int, float]]:
    rows = np.asarray(rows, dtype=np.float64)
    return [predict(model, rows[i]) for i in range(len(rows))]


def predict_name(model: ForestModel, row: np.ndarray) -> tuple[str, float]:
    cls, conf = predict(model, row)
    return model.class_names[cls], conf


def bow_to_dense(pairs: Sequence[tuple[int, int]], n_features: int) -> np.ndarray:
    row = np.zeros(n_features, dtype=np.float64)
    for idx, count in pairs:
        if idx < n_features:
            row[idx] = count
    return row
