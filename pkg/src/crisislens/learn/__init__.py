"""Shared supervised-learning and statistics core."""

from .dataset import LabeledDataset, split_dataset
from .forest import (
    ForestModel,
    ForestParams,
    bow_to_dense,
    predict,
    predict_batch,
    predict_name,
    train_random_forest,
)
from .metrics import EvalReport, evaluate
from .stats import (
    CorrelationResult,
    TrendLine,
    ols_trend,
    pearson,
    regularized_incomplete_beta,
    student_t_two_sided_p,
)
from .tree import DecisionTree, best_split_for_feature, gini, train_decision_tree

__all__ = [
    "LabeledDataset",
    "split_dataset",
    "ForestModel",
    "ForestParams",
    "bow_to_dense",
    "predict",
    "predict_batch",
    "predict_name",
    "train_random_forest",
    "EvalReport",
    "evaluate",
    "CorrelationResult",
    "TrendLine",
    "ols_trend",
    "pearson",
    "regularized_incomplete_beta",
    "student_t_two_sided_p",
    "DecisionTree",
    "best_split_for_feature",
    "gini",
    "train_decision_tree",
]
