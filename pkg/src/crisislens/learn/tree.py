"""CART-style decision trees: Gini impurity, midpoint thresholds, seeded feature sampling.

Determinism contract: candidate features are evaluated in ascending index
order and thresholds in ascending value order, with strict-improvement
comparisons, so ties always resolve to the lowest feature index and the
smallest threshold.  Samples with value <= threshold go left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

LEAF = -1


@dataclass
class DecisionTree:
    """Flat-array tree: node i is a leaf iff ``feature[i] == LEAF``."""

    n_classes: int
    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    counts: list[list[int]] = field(default_factory=list)  # leaf class histograms

    def _add_node(self) -> int:
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.counts.append([])
        return len(self.feature) - 1

    def leaf_counts(self, row: np.ndarray) -> list[int]:
        node = 0
        while self.feature[node] != LEAF:
            if row[self.feature[node]] <= self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return self.counts[node]

    def vote(self, row: np.ndarray) -> int:
        """Majority class of the reached leaf; ties go to the lowest class index."""
        hist = self.leaf_counts(row)
        best, best_count = 0, hist[0]
        for cls in range(1, len(hist)):
            if hist[cls] > best_count:
                best, best_count = cls, hist[cls]
        return best

    def depth(self) -> int:
        if not self.feature:
            return 0
        deepest = 0
        stack = [(0, 0)]
        while stack:
            node, d = stack.pop()
            if self.feature[node] == LEAF:
                deepest = max(deepest, d)
            else:
                stack.append((self.left[node], d + 1))
                stack.append((self.right[node], d + 1))
        return deepest

    def to_dict(self) -> dict:
        return {
            "n_classes": self.n_classes,
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left,
            "right": self.right,
            "counts": self.counts,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "DecisionTree":
        return cls(
            n_classes=obj["n_classes"],
            feature=list(obj["feature"]),
            threshold=[float(t) for t in obj["threshold"]],
            left=list(obj["left"]),
            right=list(obj["right"]),
            counts=[list(c) for c in obj["counts"]],
        )


def gini(counts: np.ndarray) -> float:
    """Gini impurity 1 - sum(p^2) of a class-count vector."""
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.dot(p, p))


def best_split_for_feature(
    values: np.ndarray,
    labels: np.ndarray,
    n_classes: int,
    min_leaf: int,
) -> Optional[tuple[float, float]]:
    """Best (weighted-gini, threshold) for one feature, or None if unsplittable.

    Thresholds are midpoints between consecutive distinct sorted values;
    among equal-score thresholds the smallest wins.
    """
    order = np.argsort(values, kind="stable")
    v = values[order]
    y = labels[order]
    n = len(v)
    # cumulative class counts after each sample in sorted order
    onehot = np.zeros((n, n_classes), dtype=np.int64)
    onehot[np.arange(n), y] = 1
    cum = np.cumsum(onehot, axis=0)
    total = cum[-1]
    best: Optional[tuple[float, float]] = None
    for i in range(n - 1):
        if v[i] == v[i + 1]:
            continue
        n_left = i + 1
        n_right = n - n_left
        if n_left < min_leaf or n_right < min_leaf:
            continue
        left_counts = cum[i]
        right_counts = total - left_counts
        score = (
            n_left * gini(left_counts) + n_right * gini(right_counts)
        ) / n
        if best is None or score < best[0]:
            thr = (float(v[i]) + float(v[i + 1])) / 2.0
            best = (score, thr)
    return best


def train_decision_tree(
    features: np.ndarray,
    labels: np.ndarray,
    n_classes: int,
    max_features: int,
    min_leaf: int = 1,
    max_depth: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> DecisionTree:
    """Grow a tree to purity (or the configured limits) on dense features.

    At every node ``max_features`` feature indices are sampled uniformly
    without replacement from the tree's RNG, then examined in ascending
    order.  A node with no admissible split becomes a leaf.
    """
    if len(labels) == 0:
        raise ValueError("cannot train a tree on an empty dataset")
    if rng is None:
        rng = np.random.default_rng(0)
    n_total_features = features.shape[1]
    k = min(max_features, n_total_features)
    tree = DecisionTree(n_classes=n_classes)

    def node_histogram(idx: np.ndarray) -> list[int]:
        return np.bincount(labels[idx], minlength=n_classes).tolist()

    # Explicit stack with (parent, side) backpatching: keeps arbitrarily deep
    # trees off the Python call stack.  Work items are processed LIFO with
    # the left child pushed last, which reproduces recursive growth order.
    root_item = (np.arange(len(labels)), 0, -1, "")
    stack = [root_item]
    while stack:
        idx, depth, parent, side = stack.pop()
        node = tree._add_node()
        if parent >= 0:
            if side == "L":
                tree.left[parent] = node
            else:
                tree.right[parent] = node
        hist = node_histogram(idx)
        pure = max(hist) == len(idx)
        budget_hit = max_depth is not None and depth >= max_depth
        if pure or budget_hit or len(idx) < 2 * min_leaf:
            tree.counts[node] = hist
            continue
        sampled = np.sort(rng.permutation(n_total_features)[:k])
        best_feature = -1
        best_score = 0.0
        best_thr = 0.0
        found = False
        for f in sampled:
            result = best_split_for_feature(
                features[idx, f], labels[idx], n_classes, min_leaf
            )
            if result is None:
                continue
            score, thr = result
            if not found or score < best_score:
                found = True
                best_feature, best_score, best_thr = int(f), score, thr
        if not found:
            tree.counts[node] = hist
            continue
        mask = features[idx, best_feature] <= best_thr
        tree.feature[node] = best_feature
        tree.threshold[node] = best_thr
        stack.append((idx[~mask], depth + 1, node, "R"))
        stack.append((idx[mask], depth + 1, node, "L"))
    return tree
