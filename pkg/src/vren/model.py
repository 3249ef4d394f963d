"""Rally data model: rounds, rallies, matches, and structural validation.

A round is one team's possession: the incoming serve (first round only),
the receive/dig, the pass, the set, the attack, the block situation, and
where the ball went.  A rally is an ordered run of rounds plus who won
and why; a match is an ordered run of rallies.

Values with a closed domain (zones, enums, blocker counts) are rejected
at construction.  Sequencing rules that span rounds (numbering, team
alternation, serve placement, overpass propagation, pass-rating
consistency) are reported as diagnostics by :func:`validate_rally` so
that malformed transcriptions can be loaded, inspected, and repaired.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields, replace

from . import court
from .court import PassRating, SetLocation
from .diagnostics import Diagnostic, EnumValueError, Severity


class Team(enum.Enum):
    A = "A"
    B = "B"

    @property
    def other(self) -> "Team":
        return Team.B if self is Team.A else Team.A


class ServeType(enum.Enum):
    FLOAT = "float"
    JUMP = "jump"
    HYBRID = "hybrid"


class HitType(enum.Enum):
    HIT = "hit"
    OFF_SPEED = "off_speed"
    ROLL_SHOT = "roll_shot"
    TIP = "tip"
    FREE_BALL = "free_ball"
    DUMP = "dump"
    OVERPASS = "overpass"
    BLOCKED = "blocked"
    NONE = "none"


class SetSub(enum.Enum):
    """Optional refinement tags for a set destination."""

    THIRTY_ONE = "thirty_one"


class Level(enum.Enum):
    COLLEGE = "college"
    PROFESSIONAL = "professional"
    SYNTHETIC = "synthetic"


#: Suggested winning/losing reason tokens.  The fields are open lowercase
#: tokens; these are the ones reports know how to group.
REASON_VOCABULARY = (
    "kill",
    "block",
    "ace",
    "attack_error",
    "service_error",
    "net_violation",
    "four_hits",
    "other",
)

_ZONE_FIELDS = (
    "serve_from",
    "recv_move_from",
    "recv_at",
    "pass_to",
    "set_from",
    "hit_from",
    "target",
)


@dataclass(frozen=True)
class Round:
    """One team's possession within a rally."""

    round_no: int
    team: Team
    serve_type: ServeType | None = None
    serve_from: int | None = None
    recv_move_from: int | None = None
    recv_at: int | None = None
    pass_rating: PassRating | None = None
    pass_to: int | None = None
    set_location: SetLocation = SetLocation.NONE
    set_sub: SetSub | None = None
    set_from: int | None = None
    hit_type: HitType = HitType.NONE
    hit_from: int | None = None
    num_blockers: int = 0
    block_touch: bool = False
    target: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.round_no, int) or isinstance(self.round_no, bool) or self.round_no < 1:
            raise EnumValueError(f"round_no must be a positive integer, got {self.round_no!r}")
        for name in _ZONE_FIELDS:
            value = getattr(self, name)
            if value is not None:
                court.check_zone(value)
        if isinstance(self.num_blockers, bool) or self.num_blockers not in (0, 1, 2, 3):
            raise EnumValueError(f"num_blockers must be 0..3, got {self.num_blockers!r}")


@dataclass(frozen=True)
class Rally:
    """One point, from serve to ball down, with its outcome."""

    rally_no: int
    winner: Team
    winning_reason: str
    losing_reason: str
    rounds: tuple[Round, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rounds", tuple(self.rounds))


@dataclass(frozen=True)
class Match:
    match_id: str
    team_a: str
    team_b: str
    level: Level = Level.COLLEGE
    rallies: tuple[Rally, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "rallies", tuple(self.rallies))


def winner_label(rally: Rally) -> int:
    """Binary rally outcome: 1 if team A won, 0 if team B won."""
    return 1 if rally.winner is Team.A else 0


def _round_diagnostics(rally: Rally, rnd: Round) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    where = {"rally_no": rally.rally_no, "round_no": rnd.round_no}

    if rnd.round_no != 1 and (rnd.serve_type is not None or rnd.serve_from is not None):
        diags.append(
            Diagnostic(
                "E_SERVE_NOT_ROUND1",
                Severity.ERROR,
                "serve fields are only valid on round 1",
                **where,
            )
        )
    # A missing serve origin is tolerated on round 1 (it is often not
    # visible in footage); a missing serve type is worth flagging.
    if rnd.round_no == 1 and rnd.serve_type is None:
        diags.append(
            Diagnostic(
                "W_SERVE_MISSING",
                Severity.WARNING,
                "round 1 has no serve type recorded",
                **where,
            )
        )

    if rnd.pass_rating is PassRating.OVERPASS:
        if rnd.set_location is not SetLocation.OVERPASS or rnd.hit_type is not HitType.OVERPASS:
            diags.append(
                Diagnostic(
                    "E_OVERPASS_PROPAGATION",
                    Severity.ERROR,
                    "an overpass round must carry set=overpass and hit=overpass",
                    **where,
                )
            )

    if (
        rnd.pass_to is not None
        and rnd.pass_rating is not None
        and rnd.pass_rating is not PassRating.OVERPASS
    ):
        expected = court.pass_rating_for(rnd.pass_to, crossed_net=False)
        if rnd.pass_rating is not expected:
            diags.append(
                Diagnostic(
                    "W_PASS_RATING_MISMATCH",
                    Severity.WARNING,
                    f"pass to zone {rnd.pass_to} rates as {expected.value},"
                    f" not {rnd.pass_rating.value}",
                    **where,
                )
            )

    if rnd.block_touch and rnd.num_blockers < 1:
        diags.append(
            Diagnostic(
                "E_BLOCK_TOUCH_NO_BLOCKERS",
                Severity.ERROR,
                "block_touch requires at least one blocker",
                **where,
            )
        )
    return diags


def validate_rally(rally: Rally) -> list[Diagnostic]:
    """Check every sequencing rule; deterministic and side-effect free.

    A rally is lint-clean when no returned diagnostic has error
    severity.  Warnings mark suspicious but loadable data.
    """
    diags: list[Diagnostic] = []

    if not rally.rounds:
        diags.append(
            Diagnostic(
                "E_EMPTY_RALLY",
                Severity.ERROR,
                "rally has no rounds",
                rally_no=rally.rally_no,
            )
        )
        return diags

    for i, rnd in enumerate(rally.rounds):
        if rnd.round_no != i + 1:
            diags.append(
                Diagnostic(
                    "E_ROUND_GAP",
                    Severity.ERROR,
                    f"expected round {i + 1}, found round {rnd.round_no}",
                    rally_no=rally.rally_no,
                    round_no=rnd.round_no,
                )
            )

    for prev, curr in zip(rally.rounds, rally.rounds[1:]):
        if curr.team is prev.team:
            # A touched block can rebound to the same side, so the rule
            # softens to a warning when the prior round saw a touch.
            softened = prev.block_touch
            diags.append(
                Diagnostic(
                    "W_TEAM_ALTERNATION" if softened else "E_TEAM_ALTERNATION",
                    Severity.WARNING if softened else Severity.ERROR,
                    f"round {curr.round_no} repeats team {curr.team.value}",
                    rally_no=rally.rally_no,
                    round_no=curr.round_no,
                )
            )

    for rnd in rally.rounds:
        diags.extend(_round_diagnostics(rally, rnd))
    return diags


def validate_match(match: Match) -> list[Diagnostic]:
    """Match-level numbering check plus every rally's diagnostics."""
    diags: list[Diagnostic] = []
    for i, rally in enumerate(match.rallies):
        if rally.rally_no != i + 1:
            diags.append(
                Diagnostic(
                    "E_RALLY_GAP",
                    Severity.ERROR,
                    f"expected rally {i + 1}, found rally {rally.rally_no}",
                    rally_no=rally.rally_no,
                )
            )
    for rally in match.rallies:
        diags.extend(validate_rally(rally))
    return diags


#: Round fields a what-if perturbation may change.
MUTABLE_ROUND_FIELDS = tuple(f.name for f in fields(Round) if f.name != "round_no")


def replace_round(rnd: Round, **changes) -> Round:
    """dataclasses.replace with domain validation re-run by construction."""
    return replace(rnd, **changes)


_FIELD_ENUMS = {
    "team": Team,
    "serve_type": ServeType,
    "pass_rating": PassRating,
    "set_location": SetLocation,
    "set_sub": SetSub,
    "hit_type": HitType,
}
_NON_NULLABLE = {"team", "set_location", "hit_type", "num_blockers", "block_touch"}


def coerce_field_value(name: str, value):
    """Turn a JSON/CLI primitive into the typed value a Round field takes.

    Enum fields accept their value tokens (e.g. ``"d_ball"``,
    ``"in_system"``); zone fields take integers; ``None`` clears an
    optional field.  Raises EnumValueError on anything else.
    """
    if name not in MUTABLE_ROUND_FIELDS:
        raise EnumValueError(f"unknown round field {name!r}")
    if value is None:
        if name in _NON_NULLABLE:
            raise EnumValueError(f"{name} cannot be cleared")
        return None
    if name in _FIELD_ENUMS:
        enum_type = _FIELD_ENUMS[name]
        if isinstance(value, enum_type):
            return value
        try:
            return enum_type(value)
        except ValueError:
            tokens = sorted(e.value for e in enum_type)
            raise EnumValueError(f"{name}={value!r} is not one of {tokens}") from None
    if name == "block_touch":
        if isinstance(value, bool):
            return value
        raise EnumValueError(f"block_touch={value!r} must be a boolean")
    # zone fields and num_blockers: integers, validated by Round itself
    if isinstance(value, bool) or not isinstance(value, int):
        raise EnumValueError(f"{name}={value!r} must be an integer")
    return value
