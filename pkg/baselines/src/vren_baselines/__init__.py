"""Deep-learning baselines over exported vren feature files.

This package deliberately does not import :mod:`vren`.  It consumes the
toolkit only through its published artifacts — feature files written by
``vren encode`` and prediction/report JSON written by ``vren eval`` — so
the two codebases can only agree by honoring the same contracts, not by
sharing code.
"""

from .archs import FAMILIES, TASK_OUTPUTS, ArchSpec, build_model, count_parameters
from .data import FeatureFile, SchemaError, read_features
from .metrics import (
    auc,
    binary_accuracy,
    binary_report,
    brier,
    categorical_accuracy,
    categorical_report,
    mae,
)
from .train import FitConfig, load_report, save_report, train_eval

__all__ = [
    "ArchSpec",
    "FAMILIES",
    "FeatureFile",
    "FitConfig",
    "SchemaError",
    "TASK_OUTPUTS",
    "auc",
    "binary_accuracy",
    "binary_report",
    "brier",
    "build_model",
    "categorical_accuracy",
    "categorical_report",
    "count_parameters",
    "load_report",
    "mae",
    "read_features",
    "save_report",
    "train_eval",
]

__version__ = "0.1.0"
