"""Deterministic numeric encoding of rounds, windows, and task datasets.

A round encodes to a fixed-width vector of one-hot blocks plus three
scalars (222 features).  Optional fields one-hot an explicit "absent"
category instead of being all-zero, so every categorical block of a real
round sums to exactly 1; the same "absent" pattern doubles as the padding
block for windows shorter than their history.  The one deliberate
exception is masking: a masked slot is zeroed outright, because its job
is to hide information, not to encode "absent" (which itself carries
information).

A window is the current round prefixed by its k most recent predecessors
in match play order, by default crossing rally boundaries (serve order
carries between rallies) but never match boundaries.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .court import ALL_ZONES, PassRating, SetLocation
from .diagnostics import EmptyScopeError, SchemaError
from .model import HitType, Match, Round, ServeType, SetSub, Team, winner_label

ABSENT = "absent"

_ZONE_CATEGORIES = tuple(f"z{z}" for z in ALL_ZONES) + (ABSENT,)
_SERVE_CATEGORIES = tuple(s.value for s in ServeType) + (ABSENT,)
_PASS_CATEGORIES = tuple(p.value for p in PassRating) + (ABSENT,)
_SET_CATEGORIES = tuple(s.value for s in SetLocation) + (ABSENT,)
_SET_SUB_CATEGORIES = tuple(s.value for s in SetSub) + (ABSENT,)
_HIT_CATEGORIES = tuple(h.value for h in HitType) + (ABSENT,)


@dataclass(frozen=True)
class Slot:
    """One contiguous feature block: a one-hot category set or a scalar."""

    name: str
    start: int
    categories: tuple[str, ...] = ()  # empty for scalar slots

    @property
    def width(self) -> int:
        return len(self.categories) if self.categories else 1

    @property
    def stop(self) -> int:
        return self.start + self.width

    def feature_names(self) -> list[str]:
        if not self.categories:
            return [self.name]
        return [f"{self.name}_{c}" for c in self.categories]


def _build_slots() -> tuple[Slot, ...]:
    spec: list[tuple[str, tuple[str, ...]]] = [
        ("serve_type", _SERVE_CATEGORIES),
        ("serve_from", _ZONE_CATEGORIES),
        ("recv_move_from", _ZONE_CATEGORIES),
        ("recv_at", _ZONE_CATEGORIES),
        ("pass_rating", _PASS_CATEGORIES),
        ("pass_to", _ZONE_CATEGORIES),
        ("set_location", _SET_CATEGORIES),
        ("set_sub", _SET_SUB_CATEGORIES),
        ("set_from", _ZONE_CATEGORIES),
        ("hit_type", _HIT_CATEGORIES),
        ("hit_from", _ZONE_CATEGORIES),
        ("num_blockers", ()),
        ("block_touch", ()),
        ("target", _ZONE_CATEGORIES),
        ("team", ()),
    ]
    slots = []
    start = 0
    for name, categories in spec:
        slot = Slot(name=name, start=start, categories=categories)
        slots.append(slot)
        start = slot.stop
    return tuple(slots)


@dataclass(frozen=True)
class FeatureLayout:
    slots: tuple[Slot, ...]

    @property
    def width(self) -> int:
        return self.slots[-1].stop

    def slot(self, name: str) -> Slot:
        for slot in self.slots:
            if slot.name == name:
                return slot
        raise KeyError(name)

    def feature_names(self) -> list[str]:
        names: list[str] = []
        for slot in self.slots:
            names.extend(slot.feature_names())
        return names

    def layout_hash(self) -> str:
        text = ";".join(
            f"{s.name}[{s.start}:{s.stop}]=" + ",".join(s.categories) for s in self.slots
        )
        return hashlib.sha256(text.encode()).hexdigest()[:16]


LAYOUT = FeatureLayout(slots=_build_slots())

# Slots hidden from each prediction task.  Masking from the set decision
# hides everything from the set onwards (including the block, which
# happens after the hit); masking from the hit hides only the swing and
# where it went.
class MaskKind(enum.Enum):
    NO_MASK = "no_mask"
    FROM_SET = "from_set"
    FROM_HIT = "from_hit"


MASKED_SLOTS: dict[MaskKind, tuple[str, ...]] = {
    MaskKind.NO_MASK: (),
    MaskKind.FROM_SET: (
        "set_location",
        "set_sub",
        "set_from",
        "hit_type",
        "hit_from",
        "num_blockers",
        "block_touch",
        "target",
    ),
    MaskKind.FROM_HIT: ("hit_type", "hit_from", "target"),
}


def _set_category(vec: np.ndarray, slot: Slot, category: str) -> None:
    vec[slot.start + slot.categories.index(category)] = 1.0


def _zone_cat(zone: int | None) -> str:
    return ABSENT if zone is None else f"z{zone}"


def encode_round(rnd: Round, mask: MaskKind = MaskKind.NO_MASK) -> np.ndarray:
    """Encode one round as a width-W float vector."""
    vec = np.zeros(LAYOUT.width)
    _set_category(vec, LAYOUT.slot("serve_type"), ABSENT if rnd.serve_type is None else rnd.serve_type.value)
    _set_category(vec, LAYOUT.slot("serve_from"), _zone_cat(rnd.serve_from))
    _set_category(vec, LAYOUT.slot("recv_move_from"), _zone_cat(rnd.recv_move_from))
    _set_category(vec, LAYOUT.slot("recv_at"), _zone_cat(rnd.recv_at))
    _set_category(vec, LAYOUT.slot("pass_rating"), ABSENT if rnd.pass_rating is None else rnd.pass_rating.value)
    _set_category(vec, LAYOUT.slot("pass_to"), _zone_cat(rnd.pass_to))
    _set_category(vec, LAYOUT.slot("set_location"), rnd.set_location.value)
    _set_category(vec, LAYOUT.slot("set_sub"), ABSENT if rnd.set_sub is None else rnd.set_sub.value)
    _set_category(vec, LAYOUT.slot("set_from"), _zone_cat(rnd.set_from))
    _set_category(vec, LAYOUT.slot("hit_type"), rnd.hit_type.value)
    _set_category(vec, LAYOUT.slot("hit_from"), _zone_cat(rnd.hit_from))
    vec[LAYOUT.slot("num_blockers").start] = rnd.num_blockers / 3.0
    vec[LAYOUT.slot("block_touch").start] = 1.0 if rnd.block_touch else 0.0
    _set_category(vec, LAYOUT.slot("target"), _zone_cat(rnd.target))
    vec[LAYOUT.slot("team").start] = 1.0 if rnd.team is Team.A else 0.0

    for name in MASKED_SLOTS[mask]:
        slot = LAYOUT.slot(name)
        vec[slot.start : slot.stop] = 0.0
    return vec


def padding_vector() -> np.ndarray:
    """The all-absent block used to left-pad short windows."""
    vec = np.zeros(LAYOUT.width)
    for slot in LAYOUT.slots:
        if slot.categories:
            _set_category(vec, slot, ABSENT)
    return vec


def encode_window(history: Sequence[Round], k: int, mask: MaskKind = MaskKind.NO_MASK) -> np.ndarray:
    """Encode the last round of ``history`` with its k predecessors.

    Blocks run oldest to newest; missing predecessors become padding
    blocks at the front, so the current round always occupies the final
    W features.
    """
    if not history:
        raise ValueError("history must contain at least the current round")
    priors = list(history[:-1])[-k:] if k else []
    blocks = [padding_vector()] * (k - len(priors))
    blocks.extend(encode_round(rnd) for rnd in priors)
    blocks.append(encode_round(history[-1], mask))
    return np.concatenate(blocks)


def window_feature_names(k: int) -> list[str]:
    """Column names for a k-window: r{k} (oldest) through r0 (current)."""
    names = []
    for i in range(k + 1):
        offset = k - i
        names.extend(f"r{offset}_{name}" for name in LAYOUT.feature_names())
    return names


# ---------------------------------------------------------------------------
# task datasets

SET_TYPE_CLASSES = ("quick", "outside", "oppo", "bic", "d_ball", "dump", "overpass", "blank", "blocked")
HIT_TYPE_CLASSES = ("hit", "off_speed", "roll_shot", "tip", "free_ball", "dump", "overpass", "blocked", "blank")


class TaskKind(enum.Enum):
    RALLY_WINNER = "rally_winner"
    SET_TYPE = "set_type"
    HIT_TYPE = "hit_type"

    @property
    def classes(self) -> tuple[str, ...]:
        if self is TaskKind.RALLY_WINNER:
            return ("team_b_wins", "team_a_wins")
        if self is TaskKind.SET_TYPE:
            return SET_TYPE_CLASSES
        return HIT_TYPE_CLASSES

    @property
    def mask(self) -> MaskKind:
        if self is TaskKind.RALLY_WINNER:
            return MaskKind.NO_MASK
        if self is TaskKind.SET_TYPE:
            return MaskKind.FROM_SET
        return MaskKind.FROM_HIT


def _set_type_label(rnd: Round) -> int:
    # thirty_one is a quick refinement; prediction folds it into quick.
    if rnd.set_location is SetLocation.NONE:
        return SET_TYPE_CLASSES.index("blank")
    return SET_TYPE_CLASSES.index(rnd.set_location.value)


def _hit_type_label(rnd: Round) -> int:
    if rnd.hit_type is HitType.NONE:
        return HIT_TYPE_CLASSES.index("blank")
    return HIT_TYPE_CLASSES.index(rnd.hit_type.value)


@dataclass(frozen=True)
class FeatureMatrix:
    """Encoded examples: X (n, (k+1)*W), integer labels, and match groups."""

    X: np.ndarray
    y: np.ndarray
    groups: tuple[str, ...]
    task: TaskKind | None
    k: int

    def __post_init__(self):
        if not (self.X.shape[0] == self.y.shape[0] == len(self.groups)):
            raise ValueError("X, y and groups must agree on example count")

    @property
    def n_examples(self) -> int:
        return self.X.shape[0]

    @property
    def width(self) -> int:
        return self.X.shape[1]


def build_dataset(
    matches: Iterable[Match],
    task: TaskKind,
    k: int = 4,
    within_rally_only: bool = False,
) -> FeatureMatrix:
    """One example per round: the round's window against its task label.

    Callers are expected to hand in lint-clean matches; validation is the
    parser/linter's job, not repeated here.
    """
    xs: list[np.ndarray] = []
    ys: list[int] = []
    groups: list[str] = []
    for match in matches:
        history: list[Round] = []
        for rally in match.rallies:
            if within_rally_only:
                history = []
            for rnd in rally.rounds:
                history.append(rnd)
                xs.append(encode_window(history, k, task.mask))
                if task is TaskKind.RALLY_WINNER:
                    ys.append(winner_label(rally))
                elif task is TaskKind.SET_TYPE:
                    ys.append(_set_type_label(rnd))
                else:
                    ys.append(_hit_type_label(rnd))
                groups.append(match.match_id)
    if not xs:
        raise EmptyScopeError("no rounds to encode")
    return FeatureMatrix(X=np.array(xs), y=np.array(ys, dtype=np.int64), groups=tuple(groups), task=task, k=k)


# ---------------------------------------------------------------------------
# feature file export/import (the contract consumed by external baselines)

def _float_repr(value: float) -> str:
    # repr round-trips doubles exactly; integers stay compact ("0.0").
    return repr(float(value))


def export_features(fm: FeatureMatrix, path: str, fmt: str = "csv") -> None:
    columns = window_feature_names(fm.k)
    if fmt == "csv":
        lines = [",".join(columns + ["label", "group"])]
        for i in range(fm.n_examples):
            group = fm.groups[i]
            if "," in group or "\n" in group:
                raise ValueError(f"group id {group!r} not CSV-safe")
            row = [_float_repr(v) for v in fm.X[i]]
            row.append(str(int(fm.y[i])))
            row.append(group)
            lines.append(",".join(row))
        text = "\n".join(lines) + "\n"
    elif fmt == "jsonl":
        header = {
            "columns": columns,
            "task": None if fm.task is None else fm.task.value,
            "k": fm.k,
            "width": fm.width,
        }
        lines = [json.dumps(header, separators=(",", ":"))]
        for i in range(fm.n_examples):
            lines.append(
                json.dumps(
                    {"x": [float(v) for v in fm.X[i]], "y": int(fm.y[i]), "group": fm.groups[i]},
                    separators=(",", ":"),
                )
            )
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown feature format {fmt!r}")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write features to {path}: {exc}") from exc


def _k_from_columns(columns: list[str]) -> int:
    offsets = set()
    for col in columns:
        if not col.startswith("r"):
            raise SchemaError(f"unexpected feature column {col!r}")
        offsets.add(int(col[1 : col.index("_")]))
    k = max(offsets)
    if offsets != set(range(k + 1)):
        raise SchemaError("feature columns do not form a contiguous window")
    return k


def import_features(path: str) -> FeatureMatrix:
    """Re-load an exported feature file (format sniffed from content)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            first = fh.readline()
            rest = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read features from {path}: {exc}") from exc

    if first.startswith("{"):
        header = json.loads(first)
        columns = header["columns"]
        k = _k_from_columns(columns)
        task = None if header.get("task") is None else TaskKind(header["task"])
        xs, ys, groups = [], [], []
        for line in rest.splitlines():
            if not line:
                continue
            doc = json.loads(line)
            if len(doc["x"]) != len(columns):
                raise SchemaError(f"{path}: row width {len(doc['x'])} != header width {len(columns)}")
            xs.append(doc["x"])
            ys.append(doc["y"])
            groups.append(doc["group"])
        X = np.array(xs) if xs else np.zeros((0, len(columns)))
        return FeatureMatrix(X=X, y=np.array(ys, dtype=np.int64), groups=tuple(groups), task=task, k=k)

    header_cols = first.rstrip("\n").split(",")
    if len(header_cols) < 3 or header_cols[-2:] != ["label", "group"]:
        raise SchemaError(f"{path}: expected a feature CSV header ending in label,group")
    columns = header_cols[:-2]
    k = _k_from_columns(columns)
    xs, ys, groups = [], [], []
    for line_no, line in enumerate(rest.splitlines(), start=2):
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != len(header_cols):
            raise SchemaError(f"{path}:{line_no}: expected {len(header_cols)} cells, got {len(cells)}")
        try:
            xs.append([float(c) for c in cells[:-2]])
            ys.append(int(cells[-2]))
        except ValueError as exc:
            raise SchemaError(f"{path}:{line_no}: {exc}") from None
        groups.append(cells[-1])
    X = np.array(xs) if xs else np.zeros((0, len(columns)))
    if not all(math.isfinite(v) for row in xs for v in row):
        raise SchemaError(f"{path}: non-finite feature value")
    return FeatureMatrix(X=X, y=np.array(ys, dtype=np.int64), groups=tuple(groups), task=None, k=k)
