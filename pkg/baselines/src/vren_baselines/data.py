"""Readers for exported feature files (CSV and JSON-lines).

A feature file holds one flattened round-window per row: ``k+1`` blocks
of ``W`` float features, in columns named ``r{k}_*`` (the oldest round)
down to ``r0_*`` (the current round), followed by an integer ``label``
and a string ``group`` id.  CSV files carry that layout in the header
row; JSON-lines files carry it in a leading header object with keys
``columns``, ``task``, ``k``, and ``width``.

Everything a sequence model needs — the window length ``k+1`` and the
per-round width ``W`` — is recovered from the header alone, so this
module needs no private knowledge of the encoder.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np


class SchemaError(ValueError):
    """A feature file does not match the published layout."""

    code = "E_SCHEMA"


def _window_from_columns(columns: list[str]) -> tuple[int, int]:
    """Return (k, W) from feature column names, or raise SchemaError."""
    if not columns:
        raise SchemaError("feature file has no feature columns")
    offsets: dict[int, int] = {}
    for col in columns:
        if not col.startswith("r") or "_" not in col:
            raise SchemaError(f"unexpected feature column {col!r}")
        try:
            offset = int(col[1 : col.index("_")])
        except ValueError:
            raise SchemaError(f"unexpected feature column {col!r}") from None
        offsets[offset] = offsets.get(offset, 0) + 1
    k = max(offsets)
    if set(offsets) != set(range(k + 1)):
        raise SchemaError("feature columns do not form a contiguous window")
    widths = set(offsets.values())
    if len(widths) != 1:
        raise SchemaError("window blocks disagree on per-round width")
    return k, widths.pop()


@dataclass(frozen=True)
class FeatureFile:
    """An exported dataset: flattened windows, labels, and match groups."""

    X: np.ndarray  # (n, (k+1)*W) float64
    y: np.ndarray  # (n,) int64
    groups: tuple[str, ...]
    columns: tuple[str, ...]
    task: str | None
    k: int
    block_width: int  # W, the per-round feature count

    @property
    def n_examples(self) -> int:
        return self.X.shape[0]

    @property
    def width(self) -> int:
        return self.X.shape[1]

    @property
    def seq_len(self) -> int:
        return self.k + 1

    def sequences(self) -> np.ndarray:
        """Rows reshaped to (n, k+1, W), oldest round first."""
        return self.X.reshape(self.n_examples, self.seq_len, self.block_width)


def _finish(
    xs: list[list[float]],
    ys: list[int],
    groups: list[str],
    columns: list[str],
    task: str | None,
    path: str,
) -> FeatureFile:
    k, block = _window_from_columns(columns)
    X = np.array(xs, dtype=np.float64) if xs else np.zeros((0, len(columns)))
    if not np.isfinite(X).all():
        raise SchemaError(f"{path}: non-finite feature value")
    return FeatureFile(
        X=X,
        y=np.array(ys, dtype=np.int64),
        groups=tuple(groups),
        columns=tuple(columns),
        task=task,
        k=k,
        block_width=block,
    )


def _read_jsonl(first: str, rest: str, path: str) -> FeatureFile:
    try:
        header = json.loads(first)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: bad JSON header: {exc}") from None
    if not isinstance(header, dict) or "columns" not in header:
        raise SchemaError(f"{path}: JSON-lines header needs a 'columns' key")
    columns = header["columns"]
    xs, ys, groups = [], [], []
    for line_no, line in enumerate(rest.splitlines(), start=2):
        if not line:
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}:{line_no}: bad JSON row: {exc}") from None
        if not isinstance(doc, dict) or not {"x", "y", "group"} <= doc.keys():
            raise SchemaError(f"{path}:{line_no}: row needs 'x', 'y', and 'group'")
        if len(doc["x"]) != len(columns):
            raise SchemaError(
                f"{path}:{line_no}: row width {len(doc['x'])} != header width {len(columns)}"
            )
        if not isinstance(doc["y"], int) or isinstance(doc["y"], bool):
            raise SchemaError(f"{path}:{line_no}: label must be an integer")
        xs.append([float(v) for v in doc["x"]])
        ys.append(doc["y"])
        groups.append(str(doc["group"]))
    return _finish(xs, ys, groups, columns, header.get("task"), path)


def _read_csv(first: str, rest: str, path: str) -> FeatureFile:
    header = first.rstrip("\n").split(",")
    if len(header) < 3 or header[-2:] != ["label", "group"]:
        raise SchemaError(f"{path}: expected a feature CSV header ending in label,group")
    columns = header[:-2]
    xs, ys, groups = [], [], []
    for line_no, line in enumerate(rest.splitlines(), start=2):
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise SchemaError(f"{path}:{line_no}: expected {len(header)} cells, got {len(cells)}")
        try:
            xs.append([float(c) for c in cells[:-2]])
            ys.append(int(cells[-2]))
        except ValueError as exc:
            raise SchemaError(f"{path}:{line_no}: {exc}") from None
        if not all(math.isfinite(v) for v in xs[-1]):
            raise SchemaError(f"{path}:{line_no}: non-finite feature value")
        groups.append(cells[-1])
    return _finish(xs, ys, groups, columns, None, path)


def read_features(path: str) -> FeatureFile:
    """Load a feature file, sniffing CSV vs JSON-lines from the first byte."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            first = fh.readline()
            rest = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read features from {path}: {exc}") from None
    if not first.strip():
        raise SchemaError(f"{path}: empty feature file")
    if first.lstrip().startswith("{"):
        return _read_jsonl(first, rest, path)
    return _read_csv(first, rest, path)
