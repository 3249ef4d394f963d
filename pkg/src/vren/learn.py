"""Logistic-regression learners, evaluation metrics, and what-if analysis.

Both learners are full-batch gradient descent on an L2-regularized
cross-entropy, written directly in numpy so the gradient is a visible
formula that tests can check against finite differences.  Weights start
at zero by default, which makes training deterministic without touching
an RNG; a nonzero ``init_scale`` draws a seeded Gaussian start instead.

The bias is never regularized: penalizing it would pull predictions
toward 0.5 on imbalanced data for no modeling benefit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .court import PassRating, pass_rating_for
from .diagnostics import (
    BadIndexError,
    DegenerateLabelsError,
    DimMismatchError,
    InvalidModelError,
    InvalidPerturbationError,
    LengthMismatchError,
    VrenError,
)
from .features import LAYOUT, FeatureMatrix, MaskKind, TaskKind, encode_window
from .model import MUTABLE_ROUND_FIELDS, Rally, Round, replace_round, validate_rally


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 300
    l2: float = 1e-4
    seed: int = 0
    init_scale: float = 0.0  # 0 = zero init; otherwise N(0, init_scale) seeded


@dataclass(frozen=True)
class LinearModel:
    """Immutable trained model; query from any thread."""

    kind: str  # "binary" | "multiclass"
    weights: np.ndarray  # (F,) binary, (C, F) multiclass
    bias: np.ndarray  # (1,) binary, (C,) multiclass
    config: TrainConfig
    layout_hash: str
    k: int
    task: TaskKind | None = None
    classes: tuple[str, ...] = ()
    loss_history: tuple[float, ...] = field(default=(), compare=False)

    @property
    def width(self) -> int:
        return self.weights.shape[-1]

    @property
    def n_classes(self) -> int:
        return 2 if self.kind == "binary" else self.weights.shape[0]


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    ez = np.exp(shifted)
    return ez / ez.sum(axis=-1, keepdims=True)


def binary_loss_and_grad(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray, float]:
    """Mean log-loss + (l2/2)||w||^2 and its exact gradient."""
    z = X @ w + b
    # log(1 + e^z) - y*z is the stable form of the cross-entropy.
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z)) + 0.5 * l2 * float(w @ w)
    p = _sigmoid(z)
    grad_w = X.T @ (p - y) / len(y) + l2 * w
    grad_b = float(np.mean(p - y))
    return loss, grad_w, grad_b


def multiclass_loss_and_grad(
    W: np.ndarray, b: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean softmax cross-entropy + (l2/2)||W||^2 and its exact gradient."""
    logits = X @ W.T + b
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    n = len(y)
    loss = float(-log_probs[np.arange(n), y].mean()) + 0.5 * l2 * float((W * W).sum())
    P = np.exp(log_probs)
    P[np.arange(n), y] -= 1.0
    grad_W = P.T @ X / n + l2 * W
    grad_b = P.mean(axis=0)
    return loss, grad_W, grad_b


def _initial(rng_shape: tuple[int, ...], config: TrainConfig) -> np.ndarray:
    if config.init_scale == 0.0:
        return np.zeros(rng_shape)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    return config.init_scale * rng.standard_normal(rng_shape)


def train_binary(fm: FeatureMatrix, config: TrainConfig = TrainConfig()) -> LinearModel:
    y = fm.y.astype(float)
    if set(np.unique(fm.y)) - {0, 1}:
        raise DegenerateLabelsError(f"binary training labels must be 0/1, got {sorted(set(fm.y))}")
    if len(np.unique(fm.y)) < 2:
        raise DegenerateLabelsError("binary training set contains a single class")
    w = _initial((fm.width,), config)
    b = 0.0
    history = []
    for _ in range(config.epochs):
        loss, grad_w, grad_b = binary_loss_and_grad(w, b, fm.X, y, config.l2)
        history.append(loss)
        w = w - config.learning_rate * grad_w
        b = b - config.learning_rate * grad_b
    return LinearModel(
        kind="binary",
        weights=w,
        bias=np.array([b]),
        config=config,
        layout_hash=LAYOUT.layout_hash(),
        k=fm.k,
        task=fm.task,
        classes=fm.task.classes if fm.task else ("0", "1"),
        loss_history=tuple(history),
    )


def train_multiclass(fm: FeatureMatrix, config: TrainConfig = TrainConfig()) -> LinearModel:
    if fm.task is not None:
        classes = fm.task.classes
    else:
        classes = tuple(str(i) for i in range(int(fm.y.max()) + 1))
    n_classes = len(classes)
    if fm.y.min() < 0 or fm.y.max() >= n_classes:
        raise DegenerateLabelsError(f"labels outside 0..{n_classes - 1}")
    if len(np.unique(fm.y)) < 2:
        raise DegenerateLabelsError("multiclass training set contains a single class")
    W = _initial((n_classes, fm.width), config)
    b = np.zeros(n_classes)
    history = []
    for _ in range(config.epochs):
        loss, grad_W, grad_b = multiclass_loss_and_grad(W, b, fm.X, fm.y, config.l2)
        history.append(loss)
        W = W - config.learning_rate * grad_W
        b = b - config.learning_rate * grad_b
    return LinearModel(
        kind="multiclass",
        weights=W,
        bias=b,
        config=config,
        layout_hash=LAYOUT.layout_hash(),
        k=fm.k,
        task=fm.task,
        classes=classes,
        loss_history=tuple(history),
    )


def predict_proba(model: LinearModel, x: np.ndarray) -> np.ndarray | float:
    """P(class 1) for binary models; a class distribution for multiclass.

    Accepts a single vector or a matrix of rows (then returns one value
    or distribution per row).
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != model.width:
        raise DimMismatchError(f"feature width {x.shape[-1]} != model width {model.width}")
    if model.kind == "binary":
        z = x @ model.weights + model.bias[0]
        p = _sigmoid(np.atleast_1d(z))
        return float(p[0]) if x.ndim == 1 else p
    logits = x @ model.weights.T + model.bias
    return _softmax(logits)


# ---------------------------------------------------------------------------
# metrics

@dataclass(frozen=True)
class EvalReport:
    n_examples: int
    binary_accuracy: float | None = None
    auc: float | None = None
    brier: float | None = None
    mae: float | None = None
    categorical_accuracy: float | None = None

    def to_json(self) -> dict:
        return {
            "n_examples": self.n_examples,
            "binary_accuracy": self.binary_accuracy,
            "auc": self.auc,
            "brier": self.brier,
            "mae": self.mae,
            "categorical_accuracy": self.categorical_accuracy,
        }


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their average rank."""
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def auc_score(probs: np.ndarray, labels: np.ndarray) -> float | None:
    """Rank-statistic AUC; ties get half credit; None on a single class."""
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        return None
    ranks = _average_ranks(probs)
    u = float(ranks[labels == 1].sum()) - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def evaluate_binary(probs, labels) -> EvalReport:
    probs = np.asarray(probs, dtype=float)
    labels = np.asarray(labels)
    if len(probs) != len(labels):
        raise LengthMismatchError(f"{len(probs)} probabilities vs {len(labels)} labels")
    if len(probs) == 0:
        raise LengthMismatchError("cannot evaluate zero examples")
    if probs.min() < 0.0 or probs.max() > 1.0:
        raise ValueError("probabilities must lie in [0, 1]")
    if set(np.unique(labels)) - {0, 1}:
        raise ValueError("labels must be 0/1")
    labels = labels.astype(float)
    preds = (probs >= 0.5).astype(float)  # ties go to class 1
    return EvalReport(
        n_examples=len(probs),
        binary_accuracy=100.0 * float(np.mean(preds == labels)),
        auc=auc_score(probs, labels.astype(int)),
        brier=float(np.mean((probs - labels) ** 2)),
        mae=float(np.mean(np.abs(probs - labels))),
    )


def evaluate_categorical(dists, labels) -> EvalReport:
    dists = np.asarray(dists, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if len(dists) != len(labels):
        raise LengthMismatchError(f"{len(dists)} distributions vs {len(labels)} labels")
    if len(dists) == 0:
        raise LengthMismatchError("cannot evaluate zero examples")
    if np.abs(dists.sum(axis=1) - 1.0).max() > 1e-6:
        raise ValueError("each distribution must sum to 1")
    preds = dists.argmax(axis=1)  # argmax breaks ties toward the lowest index
    return EvalReport(
        n_examples=len(labels),
        categorical_accuracy=100.0 * float(np.mean(preds == labels)),
    )


def split_matches(matches, seed: int = 7, val_frac: float = 0.07, test_frac: float = 0.13):
    """Deterministic match-level split into (train, val, test) lists."""
    matches = list(matches)
    if len(matches) < 3:
        raise ValueError("need at least 3 matches to split")
    order = np.random.Generator(np.random.PCG64(seed)).permutation(len(matches))
    n_val = max(1, round(val_frac * len(matches)))
    n_test = max(1, round(test_frac * len(matches)))
    val_idx = set(order[:n_val].tolist())
    test_idx = set(order[n_val : n_val + n_test].tolist())
    train = [m for i, m in enumerate(matches) if i not in val_idx and i not in test_idx]
    val = [m for i, m in enumerate(matches) if i in val_idx]
    test = [m for i, m in enumerate(matches) if i in test_idx]
    return train, val, test


# ---------------------------------------------------------------------------
# per-round win probability and the what-if engine

def _require_winner_model(model: LinearModel) -> None:
    if model.kind != "binary":
        raise InvalidModelError("per-round win probability needs a binary rally-winner model")
    expected = (model.k + 1) * LAYOUT.width
    if model.width != expected:
        raise DimMismatchError(f"model width {model.width} != (k+1)*W = {expected}")


def per_round_win_prob(
    model: LinearModel, rally: Rally, context: tuple[Round, ...] = ()
) -> list[float]:
    """P(team A wins the rally) after each successive round.

    ``context`` holds rounds played before this rally (for windows that
    reach back across the rally boundary).
    """
    _require_winner_model(model)
    history = list(context)
    probs = []
    for rnd in rally.rounds:
        history.append(rnd)
        x = encode_window(history, model.k, MaskKind.NO_MASK)
        probs.append(float(predict_proba(model, x)))
    return probs


@dataclass(frozen=True)
class WhatIfResult:
    changed_field: str
    old_value: object
    new_value: object
    p_before: float
    p_after: float
    probs_before: tuple[float, ...]
    probs_after: tuple[float, ...]

    @property
    def delta(self) -> float:
        return self.p_after - self.p_before

    def to_json(self) -> dict:
        def plain(value):
            return getattr(value, "value", value)

        return {
            "changed_field": self.changed_field,
            "old_value": plain(self.old_value),
            "new_value": plain(self.new_value),
            "p_before": self.p_before,
            "p_after": self.p_after,
            "delta": self.delta,
            "probs_before": list(self.probs_before),
            "probs_after": list(self.probs_after),
        }


def perturb_rally(rally: Rally, round_index: int, fld: str, new_value) -> Rally:
    """Replace one field of one round, re-rating the pass if needed."""
    if not 0 <= round_index < len(rally.rounds):
        raise BadIndexError(f"round index {round_index} outside 0..{len(rally.rounds) - 1}")
    if fld not in MUTABLE_ROUND_FIELDS:
        raise InvalidPerturbationError(f"{fld!r} is not a perturbable round field")
    rnd = rally.rounds[round_index]
    changes = {fld: new_value}
    if fld == "pass_to" and new_value is not None and rnd.pass_rating is not PassRating.OVERPASS:
        changes["pass_rating"] = pass_rating_for(new_value)
    try:
        perturbed = replace_round(rnd, **changes)
    except VrenError as exc:
        raise InvalidPerturbationError(f"{fld}={new_value!r}: {exc.message}") from None
    rounds = list(rally.rounds)
    rounds[round_index] = perturbed
    candidate = replace(rally, rounds=tuple(rounds))
    errors = [d for d in validate_rally(candidate) if d.is_error]
    if errors:
        raise InvalidPerturbationError(f"perturbation fails lint: {errors[0].code} ({errors[0].message})")
    return candidate


def what_if(
    model: LinearModel,
    rally: Rally,
    round_index: int,
    fld: str,
    new_value,
    context: tuple[Round, ...] = (),
) -> WhatIfResult:
    """Effect of one counterfactual edit on the final win probability."""
    perturbed = perturb_rally(rally, round_index, fld, new_value)
    probs_before = per_round_win_prob(model, rally, context)
    probs_after = per_round_win_prob(model, perturbed, context)
    return WhatIfResult(
        changed_field=fld,
        old_value=getattr(rally.rounds[round_index], fld),
        new_value=getattr(perturbed.rounds[round_index], fld),
        p_before=probs_before[-1],
        p_after=probs_after[-1],
        probs_before=tuple(probs_before),
        probs_after=tuple(probs_after),
    )


# ---------------------------------------------------------------------------
# model files

_MODEL_FORMAT = 1


def save_model(model: LinearModel, path: str) -> None:
    doc = {
        "format": _MODEL_FORMAT,
        "kind": model.kind,
        "task": None if model.task is None else model.task.value,
        "classes": list(model.classes),
        "layout_hash": model.layout_hash,
        "k": model.k,
        "weights": model.weights.tolist(),
        "bias": model.bias.tolist(),
        "config": {
            "learning_rate": model.config.learning_rate,
            "epochs": model.config.epochs,
            "l2": model.config.l2,
            "seed": model.config.seed,
            "init_scale": model.config.init_scale,
        },
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path: str) -> LinearModel:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != _MODEL_FORMAT:
        raise InvalidModelError(f"unsupported model format {doc.get('format')!r}")
    if doc.get("layout_hash") != LAYOUT.layout_hash():
        raise InvalidModelError(
            f"model layout hash {doc.get('layout_hash')!r} does not match this feature layout"
        )
    kind = doc["kind"]
    weights = np.array(doc["weights"], dtype=float)
    bias = np.array(doc["bias"], dtype=float)
    if kind not in ("binary", "multiclass"):
        raise InvalidModelError(f"unknown model kind {kind!r}")
    if kind == "binary" and weights.ndim != 1:
        raise InvalidModelError("binary model weights must be a vector")
    if kind == "multiclass" and weights.ndim != 2:
        raise InvalidModelError("multiclass model weights must be a matrix")
    return LinearModel(
        kind=kind,
        weights=weights,
        bias=bias,
        config=TrainConfig(**doc["config"]),
        layout_hash=doc["layout_hash"],
        k=doc["k"],
        task=None if doc.get("task") is None else TaskKind(doc["task"]),
        classes=tuple(doc.get("classes", ())),
    )
