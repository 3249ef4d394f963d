"""Training and evaluation over exported feature files.

``train_eval`` is the whole workflow: read the files, build one model
family, fit it full-batch, and report metrics with the same definitions
(and the same JSON key set) as ``vren eval``.  The logistic family uses
plain gradient descent with the toolkit learner's published recipe
(zero init, learning rate 0.1, 300 epochs, L2 1e-4 on weights only);
the deep families use Adam at 1e-3 for 500 epochs with no weight decay.

Seeded runs are reproducible on one platform.  Bitwise reproducibility
across platforms or library versions is not promised for the deep
families; the logistic family is deterministic everywhere because it
never touches an RNG.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from . import metrics
from .archs import TASK_OUTPUTS, ArchSpec, build_model, count_parameters
from .data import FeatureFile, SchemaError, read_features


@dataclass(frozen=True)
class FitConfig:
    epochs: int
    learning_rate: float
    l2: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError("epochs must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if self.l2 < 0:
            raise ValueError("l2 must be non-negative")


def default_config(family: str) -> FitConfig:
    if family == "logistic":
        return FitConfig(epochs=300, learning_rate=0.1, l2=1e-4)
    return FitConfig(epochs=500, learning_rate=1e-3)


def _check_labels(ff: FeatureFile, task: str, path: str) -> None:
    if ff.task is not None and ff.task != task:
        raise SchemaError(f"{path}: file was exported for task {ff.task!r}, not {task!r}")
    n_outputs = TASK_OUTPUTS[task]
    upper = 1 if n_outputs == 1 else n_outputs - 1
    if ff.n_examples and (ff.y.min() < 0 or ff.y.max() > upper):
        raise SchemaError(f"{path}: labels outside 0..{upper} for task {task!r}")


def _tensors(ff: FeatureFile, binary: bool, dtype: torch.dtype):
    X = torch.as_tensor(ff.sequences(), dtype=dtype)
    if binary:
        y = torch.as_tensor(ff.y, dtype=dtype)
    else:
        y = torch.as_tensor(ff.y, dtype=torch.long)
    return X, y


def _l2_penalty(model: nn.Module, l2: float) -> torch.Tensor:
    # Weight matrices only; biases and normalization gains are exempt,
    # matching the toolkit learner's unregularized bias.
    total = sum((p * p).sum() for p in model.parameters() if p.dim() > 1)
    return 0.5 * l2 * total


def _fit(model: nn.Module, X: torch.Tensor, y: torch.Tensor, family: str, config: FitConfig):
    binary = y.dtype.is_floating_point
    if binary:
        criterion = nn.BCEWithLogitsLoss()
    else:
        criterion = nn.CrossEntropyLoss()
    if family == "logistic":
        optimizer = torch.optim.SGD(model.parameters(), lr=config.learning_rate)
    else:
        optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    history = []
    model.train()
    for _ in range(config.epochs):
        optimizer.zero_grad()
        logits = model(X)
        data_loss = criterion(logits.squeeze(-1) if binary else logits, y)
        loss = data_loss + _l2_penalty(model, config.l2) if config.l2 else data_loss
        loss.backward()
        optimizer.step()
        history.append(float(loss.detach()))
    model.eval()
    return history


def _probs(model: nn.Module, X: torch.Tensor, binary: bool) -> np.ndarray:
    with torch.no_grad():
        logits = model(X)
        if binary:
            return torch.sigmoid(logits.squeeze(-1)).numpy().astype(np.float64)
        return torch.softmax(logits, dim=1).numpy().astype(np.float64)


def _report(model: nn.Module, X: torch.Tensor, y: np.ndarray, binary: bool) -> dict:
    probs = _probs(model, X, binary)
    if binary:
        return metrics.binary_report(probs, y)
    return metrics.categorical_report(probs, y)


def train_eval(
    spec: ArchSpec,
    task: str,
    train_path: str,
    test_path: str | None = None,
    config: FitConfig | None = None,
) -> dict:
    """Train one family on a feature file and report train/test metrics."""
    if task not in TASK_OUTPUTS:
        raise ValueError(f"unknown task {task!r}; expected one of {sorted(TASK_OUTPUTS)}")
    if config is None:
        config = default_config(spec.family)

    train_ff = read_features(train_path)
    _check_labels(train_ff, task, train_path)
    if train_ff.n_examples == 0:
        raise SchemaError(f"{train_path}: no examples to train on")
    test_ff = None
    if test_path is not None:
        test_ff = read_features(test_path)
        _check_labels(test_ff, task, test_path)
        if (test_ff.k, test_ff.block_width) != (train_ff.k, train_ff.block_width):
            raise SchemaError(
                f"{test_path}: window (k={test_ff.k}, W={test_ff.block_width}) does not match "
                f"the training file (k={train_ff.k}, W={train_ff.block_width})"
            )

    n_outputs = TASK_OUTPUTS[task]
    binary = n_outputs == 1
    dtype = torch.float64 if spec.family == "logistic" else torch.float32

    torch.manual_seed(config.seed)
    model = build_model(spec, train_ff.seq_len, train_ff.block_width, n_outputs)
    X_train, y_train = _tensors(train_ff, binary, dtype)
    history = _fit(model, X_train, y_train, spec.family, config)

    report = {
        "family": spec.family,
        "task": task,
        "seed": config.seed,
        "epochs": config.epochs,
        "learning_rate": config.learning_rate,
        "l2": config.l2,
        "n_parameters": count_parameters(model),
        "final_train_loss": history[-1],
        "train": _report(model, X_train, train_ff.y, binary),
        "test": None,
    }
    if test_ff is not None:
        X_test, _ = _tensors(test_ff, binary, dtype)
        report["test"] = _report(model, X_test, test_ff.y, binary)
    return report


def save_report(report: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, indent=1)
        fh.write("\n")


def load_report(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
