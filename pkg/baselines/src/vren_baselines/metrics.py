"""Evaluation metrics, re-implemented to the toolkit's published definitions.

These are written independently of the vren package (different code,
the AUC even uses a different algorithm) but follow the same published
definitions, so agreement on shared fixtures is a genuine cross-check:

- binary accuracy: percent of ``prob >= 0.5`` guesses matching the label
  (a probability of exactly 0.5 counts as a vote for class 1);
- AUC: probability a random positive outranks a random negative, ties
  worth half — computed here as the explicit O(n^2) pairwise average;
- Brier score: mean squared error of the probability;
- MAE: mean absolute error of the probability;
- categorical accuracy: percent of argmax guesses matching the label,
  argmax breaking ties toward the lowest class index.

Report dictionaries use the exact key set of the toolkit's ``vren eval``
output so reports from both codebases are comparable field by field.
"""

from __future__ import annotations

import numpy as np

REPORT_KEYS = (
    "n_examples",
    "binary_accuracy",
    "auc",
    "brier",
    "mae",
    "categorical_accuracy",
)


def _check_binary(probs: np.ndarray, labels: np.ndarray) -> None:
    if len(probs) != len(labels):
        raise ValueError(f"{len(probs)} probabilities vs {len(labels)} labels")
    if len(probs) == 0:
        raise ValueError("cannot evaluate zero examples")
    if probs.min() < 0.0 or probs.max() > 1.0:
        raise ValueError("probabilities must lie in [0, 1]")
    if set(np.unique(labels)) - {0, 1}:
        raise ValueError("labels must be 0/1")


def binary_accuracy(probs, labels) -> float:
    probs = np.asarray(probs, dtype=float)
    labels = np.asarray(labels)
    _check_binary(probs, labels)
    preds = (probs >= 0.5).astype(int)
    return 100.0 * float(np.mean(preds == labels.astype(int)))


def auc(probs, labels) -> float | None:
    """Pairwise AUC; ``None`` when only one class is present."""
    probs = np.asarray(probs, dtype=float)
    labels = np.asarray(labels).astype(int)
    _check_binary(probs, labels)
    pos = probs[labels == 1]
    neg = probs[labels == 0]
    if len(pos) == 0 or len(neg) == 0:
        return None
    wins = (pos[:, None] > neg[None, :]).sum()
    ties = (pos[:, None] == neg[None, :]).sum()
    return (float(wins) + 0.5 * float(ties)) / (len(pos) * len(neg))


def brier(probs, labels) -> float:
    probs = np.asarray(probs, dtype=float)
    labels = np.asarray(labels)
    _check_binary(probs, labels)
    return float(np.mean((probs - labels.astype(float)) ** 2))


def mae(probs, labels) -> float:
    probs = np.asarray(probs, dtype=float)
    labels = np.asarray(labels)
    _check_binary(probs, labels)
    return float(np.mean(np.abs(probs - labels.astype(float))))


def categorical_accuracy(dists, labels) -> float:
    dists = np.asarray(dists, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if len(dists) != len(labels):
        raise ValueError(f"{len(dists)} distributions vs {len(labels)} labels")
    if len(dists) == 0:
        raise ValueError("cannot evaluate zero examples")
    if np.abs(dists.sum(axis=1) - 1.0).max() > 1e-6:
        raise ValueError("each distribution must sum to 1")
    preds = dists.argmax(axis=1)
    return 100.0 * float(np.mean(preds == labels))


def binary_report(probs, labels) -> dict:
    return {
        "n_examples": int(len(np.asarray(probs))),
        "binary_accuracy": binary_accuracy(probs, labels),
        "auc": auc(probs, labels),
        "brier": brier(probs, labels),
        "mae": mae(probs, labels),
        "categorical_accuracy": None,
    }


def categorical_report(dists, labels) -> dict:
    return {
        "n_examples": int(len(np.asarray(labels))),
        "binary_accuracy": None,
        "auc": None,
        "brier": None,
        "mae": None,
        "categorical_accuracy": categorical_accuracy(dists, labels),
    }
