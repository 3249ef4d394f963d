"""Aggregate statistics over transcribed matches.

Everything here is a pure fold over rounds, so corpus-level numbers equal
the merge of per-rally tabulations.  Conventions that are easy to get
subtly wrong, fixed here once:

* A set's *system status* is the pass rating of its own round (a setter
  inherits the pass), except in :func:`pass_set_quality`, where set
  quality is judged independently by where the setter took the ball
  (zones 11-13), so converting a bad pass into a good set is visible.
* Dump sets count in the set-location distribution and the in/out split,
  but get no row in the attack table: the setter is the attacker, so the
  attacker-category direction rules don't apply.
* Attack attempts = rounds whose hit_type is a real swing or a non-swing
  outcome (blocked, free ball); only ``none``/``overpass`` are excluded.
  Spike% and junk% share that denominator.
* Percentages are computed in double precision and rendered with two
  decimals; families that would divide by zero render NA rather than 0.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

from .court import (
    IN_SYSTEM_ZONES,
    AttackerCategory,
    HitDirection,
    PassRating,
    SetLocation,
    attacker_category,
    hit_direction,
)
from .diagnostics import EmptyScopeError
from .model import HitType, Match, Round, ServeType, SetSub, Team

# Set calls that represent an actual setting decision (prediction classes
# overpass/blank/blocked describe the absence or interruption of one).
REAL_SET_LOCATIONS = (
    SetLocation.OUTSIDE,
    SetLocation.QUICK,
    SetLocation.OPPO,
    SetLocation.BIC,
    SetLocation.D_BALL,
    SetLocation.DUMP,
)

# Attack-table row labels in display order.
ATTACK_ROW_LABELS = ("outside", "bic", "oppo", "d_ball", "thirty_one", "quick")

_RATED = (PassRating.IN_SYSTEM, PassRating.OUT_OF_SYSTEM)
_ATTEMPT_EXCLUDED = (HitType.NONE, HitType.OVERPASS)
_JUNK_TYPES = (HitType.ROLL_SHOT, HitType.TIP, HitType.OFF_SPEED)


def iter_match_rounds(matches: Iterable[Match], team: Team | None = None) -> Iterator[Round]:
    for match in matches:
        for rally in match.rallies:
            for rnd in rally.rounds:
                if team is None or rnd.team is team:
                    yield rnd


def _row_label(rnd: Round) -> str:
    if rnd.set_location is SetLocation.QUICK and rnd.set_sub is SetSub.THIRTY_ONE:
        return "thirty_one"
    return rnd.set_location.value


@dataclass(frozen=True)
class DirectionCounters:
    """Line/angle/seam tallies; x, y, z in that order."""

    x: int = 0
    y: int = 0
    z: int = 0

    @property
    def total(self) -> int:
        return self.x + self.y + self.z

    def percentages(self) -> tuple[float, float, float] | None:
        """(line%, angle%, seam%), or None when nothing was counted."""
        if self.total == 0:
            return None
        return (
            100.0 * self.x / self.total,
            100.0 * self.y / self.total,
            100.0 * self.z / self.total,
        )


@dataclass(frozen=True)
class AttackRow:
    system: PassRating
    location: str
    sets: int
    share: float | None
    attempts: int
    spike: float | None
    junk: float | None
    counters: DirectionCounters

    @property
    def directions(self) -> tuple[float, float, float] | None:
        return self.counters.percentages()

    def to_json(self) -> dict:
        line, angle, seam = self.directions or (None, None, None)
        return {
            "system": self.system.value,
            "location": self.location,
            "sets": self.sets,
            "share": self.share,
            "attempts": self.attempts,
            "spike": self.spike,
            "junk": self.junk,
            "line": line,
            "angle": angle,
            "seam": seam,
            "counters": {"x": self.counters.x, "y": self.counters.y, "z": self.counters.z},
        }


@dataclass(frozen=True)
class StatReport:
    team: Team | None
    in_share: float
    out_share: float
    rows: tuple[AttackRow, ...]

    def row(self, system: PassRating, location: str) -> AttackRow:
        for row in self.rows:
            if row.system is system and row.location == location:
                return row
        raise KeyError((system, location))

    def to_json(self) -> dict:
        return {
            "team": None if self.team is None else self.team.value,
            "in_share": self.in_share,
            "out_share": self.out_share,
            "rows": [row.to_json() for row in self.rows],
        }


@dataclass(frozen=True)
class PassSetQuality:
    in_passes: int
    out_passes: int
    in_sets: int
    out_sets: int

    @property
    def high_level(self) -> bool:
        return self.in_sets > self.in_passes and self.out_sets < self.out_passes

    def to_json(self) -> dict:
        return {
            "in_passes": self.in_passes,
            "out_passes": self.out_passes,
            "in_sets": self.in_sets,
            "out_sets": self.out_sets,
            "high_level": self.high_level,
        }


def set_location_distribution(
    matches: Iterable[Match], team: Team | None = None
) -> dict[SetLocation, float]:
    """Share of each set label over rounds that carry one (set != none)."""
    counts: Counter[SetLocation] = Counter()
    for rnd in iter_match_rounds(matches, team):
        if rnd.set_location is not SetLocation.NONE:
            counts[rnd.set_location] += 1
    total = sum(counts.values())
    if total == 0:
        raise EmptyScopeError("no set events in scope")
    return {loc: 100.0 * n / total for loc, n in counts.items()}


def serve_receive_distribution(
    matches: Iterable[Match],
    serve_type: ServeType | None = None,
    team: Team | None = None,
) -> dict[int, int]:
    """recv_at counts for first-round receptions, optionally by serve type."""
    counts: Counter[int] = Counter()
    for match in matches:
        for rally in match.rallies:
            if not rally.rounds:
                continue
            rnd = rally.rounds[0]
            if team is not None and rnd.team is not team:
                continue
            if serve_type is not None and rnd.serve_type is not serve_type:
                continue
            if rnd.recv_at is not None:
                counts[rnd.recv_at] += 1
    return dict(sorted(counts.items()))


def _rated_set_rounds(matches: Iterable[Match], team: Team | None) -> list[Round]:
    return [
        rnd
        for rnd in iter_match_rounds(matches, team)
        if rnd.set_location in REAL_SET_LOCATIONS and rnd.pass_rating in _RATED
    ]


def system_split(matches: Iterable[Match], team: Team | None = None) -> tuple[float, float]:
    """(in-system %, out-of-system %) over rated sets."""
    rounds = _rated_set_rounds(matches, team)
    if not rounds:
        raise EmptyScopeError("no rated sets in scope")
    n_in = sum(1 for rnd in rounds if rnd.pass_rating is PassRating.IN_SYSTEM)
    return 100.0 * n_in / len(rounds), 100.0 * (len(rounds) - n_in) / len(rounds)


def _attack_row(system: PassRating, location: str, rounds: list[Round], total_sets: int) -> AttackRow:
    share = None if total_sets == 0 else 100.0 * len(rounds) / total_sets
    attempts = [rnd for rnd in rounds if rnd.hit_type not in _ATTEMPT_EXCLUDED]
    spike = junk = None
    if attempts:
        spike = 100.0 * sum(1 for rnd in attempts if rnd.hit_type is HitType.HIT) / len(attempts)
        junk = 100.0 * sum(1 for rnd in attempts if rnd.hit_type in _JUNK_TYPES) / len(attempts)
    x = y = z = 0
    for rnd in attempts:
        if rnd.target is None:
            continue
        direction = hit_direction(attacker_category(rnd.set_location), rnd.target)
        if direction is HitDirection.LINE:
            x += 1
        elif direction is HitDirection.ANGLE:
            y += 1
        elif direction is HitDirection.SEAM:
            z += 1
    return AttackRow(
        system=system,
        location=location,
        sets=len(rounds),
        share=share,
        attempts=len(attempts),
        spike=spike,
        junk=junk,
        counters=DirectionCounters(x, y, z),
    )


def attack_table(matches: Iterable[Match], team: Team | None = None) -> StatReport:
    """The full per-system-status, per-set-location attack report."""
    matches = list(matches)
    in_share, out_share = system_split(matches, team)

    by_row: dict[tuple[PassRating, str], list[Round]] = {
        (system, label): []
        for system in _RATED
        for label in ATTACK_ROW_LABELS
    }
    for rnd in _rated_set_rounds(matches, team):
        if rnd.set_location is SetLocation.DUMP:
            continue
        by_row[(rnd.pass_rating, _row_label(rnd))].append(rnd)

    rows = []
    for system in _RATED:
        total_sets = sum(len(by_row[(system, label)]) for label in ATTACK_ROW_LABELS)
        for label in ATTACK_ROW_LABELS:
            rows.append(_attack_row(system, label, by_row[(system, label)], total_sets))
    return StatReport(team=team, in_share=in_share, out_share=out_share, rows=tuple(rows))


def pass_set_quality(matches: Iterable[Match], team: Team | None = None) -> PassSetQuality:
    """Pass-vs-set system counts behind the high-level-play criterion.

    Passes are judged by pass_rating; sets are judged by where the setter
    took the ball (set_from in zones 11-13), so the two can disagree.
    Sets without a recorded set_from are not judgeable and are skipped.
    """
    in_passes = out_passes = in_sets = out_sets = 0
    for rnd in iter_match_rounds(matches, team):
        if rnd.pass_rating is PassRating.IN_SYSTEM:
            in_passes += 1
        elif rnd.pass_rating is PassRating.OUT_OF_SYSTEM:
            out_passes += 1
        if rnd.set_location in REAL_SET_LOCATIONS and rnd.set_from is not None:
            if rnd.set_from in IN_SYSTEM_ZONES:
                in_sets += 1
            else:
                out_sets += 1
    if in_passes + out_passes + in_sets + out_sets == 0:
        raise EmptyScopeError("no passes or sets in scope")
    return PassSetQuality(in_passes, out_passes, in_sets, out_sets)


# ---------------------------------------------------------------------------
# report emitters

def _pct(value: float | None) -> str:
    return "NA" if value is None else f"{value:.2f}"


def _row_cells(row: AttackRow) -> list[str]:
    line, angle, seam = row.directions or (None, None, None)
    return [
        row.system.value,
        row.location,
        _pct(row.share),
        _pct(row.spike),
        _pct(row.junk),
        _pct(line),
        _pct(angle),
        _pct(seam),
    ]


_REPORT_HEADER = ["system", "set", "share", "spike", "junk", "line", "angle", "seam"]


def report_to_csv(report: StatReport) -> str:
    lines = [",".join(_REPORT_HEADER)]
    for row in report.rows:
        lines.append(",".join(_row_cells(row)))
    lines.append(f"in_system,ALL,{report.in_share:.2f},NA,NA,NA,NA,NA")
    lines.append(f"out_of_system,ALL,{report.out_share:.2f},NA,NA,NA,NA,NA")
    return "\n".join(lines) + "\n"


def report_to_text(report: StatReport) -> str:
    team = "all rounds" if report.team is None else f"team {report.team.value}"
    title = (
        f"Attack report ({team}): "
        f"in-system {report.in_share:.2f}%, out-of-system {report.out_share:.2f}%"
    )
    table = [_REPORT_HEADER] + [_row_cells(row) for row in report.rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(_REPORT_HEADER))]
    lines = [title, ""]
    for r in table:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def report_to_json(report: StatReport) -> str:
    return json.dumps(report.to_json(), indent=2) + "\n"


def zone_counts_to_csv(counts: dict[int, int]) -> str:
    lines = ["zone,count"]
    lines.extend(f"{zone},{n}" for zone, n in sorted(counts.items()))
    return "\n".join(lines) + "\n"


def zone_counts_to_text(counts: dict[int, int], title: str) -> str:
    lines = [title]
    total = sum(counts.values()) or 1
    for zone, n in sorted(counts.items()):
        lines.append(f"  zone {zone:>2}: {n:>4}  {'#' * round(40 * n / total)}")
    return "\n".join(lines) + "\n"


def distribution_to_csv(dist: dict[SetLocation, float]) -> str:
    lines = ["set,share"]
    order = {loc: i for i, loc in enumerate(SetLocation)}
    for loc in sorted(dist, key=order.__getitem__):
        lines.append(f"{loc.value},{dist[loc]:.2f}")
    return "\n".join(lines) + "\n"
