"""The 26-zone court grid and every rule derived from zone membership.

Each side of the net is divided into 26 numbered areas: 1-15 are in
bounds, 16-26 are out of bounds (a ball may still be played there, which
is why they are part of the grid).  The front row is zones 11-15 plus the
two out-of-bounds areas 16 and 26 flanking it at the net.

Documentation convention for the physical arrangement, used by the UI
zone picker and nowhere else (no rule below depends on left/right):

    net ->    16 | 11 12 13 14 15 | 26
          22 |  6  7  8  9 10 | 24
          23 |  1  2  3  4  5 | 25
             | 17 18 19 20 21 |        <- behind the end line

Attack directions are tallied against five named zone sets.  Which set
counts as "line", "angle" or "seam" depends on who is attacking, so the
direction rules are keyed by an attacker category derived from the set
destination.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .diagnostics import ZoneRangeError

ZONE_MIN = 1
ZONE_MAX = 26

ALL_ZONES = tuple(range(ZONE_MIN, ZONE_MAX + 1))
IN_BOUNDS_ZONES = frozenset(range(1, 16))
OUT_OF_BOUNDS_ZONES = frozenset(range(16, 27))
FRONT_ROW_ZONES = frozenset({11, 12, 13, 14, 15, 16, 26})
IN_SYSTEM_ZONES = frozenset({11, 12, 13})

S1 = frozenset({1, 2, 6, 7})
S2 = frozenset({4, 5, 9, 10})
S3 = frozenset({3, 8})
S4 = frozenset({11, 12})
S5 = frozenset({14, 15})

DIRECTION_SETS = {"s1": S1, "s2": S2, "s3": S3, "s4": S4, "s5": S5}


def check_zone(zone: int) -> int:
    """Validate a zone id, returning it unchanged.

    Raises ZoneRangeError (code E_ZONE_RANGE) outside 1..26.  bool is
    rejected even though it is an int subtype.
    """
    if isinstance(zone, bool) or not isinstance(zone, int):
        raise ZoneRangeError(f"zone id must be an integer, got {zone!r}")
    if not ZONE_MIN <= zone <= ZONE_MAX:
        raise ZoneRangeError(f"zone id {zone} outside {ZONE_MIN}..{ZONE_MAX}")
    return zone


class RowClass(enum.Enum):
    FRONT = "front"
    BACK = "back"


class BoundsClass(enum.Enum):
    IN_BOUNDS = "in_bounds"
    OUT_OF_BOUNDS = "out_of_bounds"


class PassRating(enum.Enum):
    IN_SYSTEM = "in_system"
    OUT_OF_SYSTEM = "out_of_system"
    OVERPASS = "overpass"


class SetLocation(enum.Enum):
    """Where the setter delivered the ball (or why there was no set)."""

    OUTSIDE = "outside"
    QUICK = "quick"
    OPPO = "oppo"
    BIC = "bic"
    D_BALL = "d_ball"
    DUMP = "dump"
    OVERPASS = "overpass"
    NONE = "none"
    BLOCKED = "blocked"


class AttackerCategory(enum.Enum):
    """Groups set destinations by which direction rule applies to the hitter."""

    OUTSIDE = "outside"
    MIDDLE_OR_BIC = "middle_or_bic"
    OPPOSITE = "opposite"


class HitDirection(enum.Enum):
    LINE = "line"
    ANGLE = "angle"
    SEAM = "seam"
    UNCOUNTED = "uncounted"


def zone_row(zone: int) -> RowClass:
    """Front row is {11..16, 26}; everything else is back row."""
    check_zone(zone)
    return RowClass.FRONT if zone in FRONT_ROW_ZONES else RowClass.BACK


def zone_bounds(zone: int) -> BoundsClass:
    """Zones 1-15 are in bounds, 16-26 out of bounds."""
    check_zone(zone)
    return BoundsClass.IN_BOUNDS if zone in IN_BOUNDS_ZONES else BoundsClass.OUT_OF_BOUNDS


def pass_rating_for(pass_to: int, crossed_net: bool = False) -> PassRating:
    """Rate a first contact from its landing zone.

    A ball sent straight over the net is an overpass regardless of zone.
    Otherwise the pass is in system iff it lands in zones 11-13.
    """
    check_zone(pass_to)
    if crossed_net:
        return PassRating.OVERPASS
    if pass_to in IN_SYSTEM_ZONES:
        return PassRating.IN_SYSTEM
    return PassRating.OUT_OF_SYSTEM


#: set destination -> attacker category; destinations with no individual
#: attacker (dump, overpass, no set, blocked) are excluded from direction
#: statistics and map to None.
_ATTACKER_BY_LOCATION = {
    SetLocation.OUTSIDE: AttackerCategory.OUTSIDE,
    SetLocation.QUICK: AttackerCategory.MIDDLE_OR_BIC,
    SetLocation.BIC: AttackerCategory.MIDDLE_OR_BIC,
    SetLocation.OPPO: AttackerCategory.OPPOSITE,
    SetLocation.D_BALL: AttackerCategory.OPPOSITE,
}


def attacker_category(set_location: SetLocation) -> AttackerCategory | None:
    """Map a set destination to the attacker whose direction rule applies.

    quick and bic share the middle/bic rule (the back row outside hits
    the bic); oppo and d-ball are the opposite in front and back row.
    """
    return _ATTACKER_BY_LOCATION.get(set_location)


# Direction rule table: (category, counted direction) -> zone set union.
_DIRECTION_RULES: dict[AttackerCategory, tuple[tuple[frozenset[int], HitDirection], ...]] = {
    AttackerCategory.OUTSIDE: (
        (S1, HitDirection.LINE),
        (S2 | S5, HitDirection.ANGLE),
        (S3, HitDirection.SEAM),
    ),
    AttackerCategory.MIDDLE_OR_BIC: (
        (S1 | S4, HitDirection.LINE),
        (S2 | S5, HitDirection.ANGLE),
        (S3, HitDirection.SEAM),
    ),
    AttackerCategory.OPPOSITE: (
        (S2, HitDirection.LINE),
        (S1 | S4, HitDirection.ANGLE),
        (S3, HitDirection.SEAM),
    ),
}


def hit_direction(category: AttackerCategory | None, landing: int) -> HitDirection:
    """Classify a hit by its landing zone under the category's rule.

    Zones outside the rule's coverage (zone 13 for everyone, the deep
    sets for some attackers, all out-of-bounds zones) return UNCOUNTED
    and are excluded from direction percentages, as are hits with no
    attacker category (category None: dumps and non-sets).
    """
    check_zone(landing)
    if category is None:
        return HitDirection.UNCOUNTED
    for zones, direction in _DIRECTION_RULES[category]:
        if landing in zones:
            return direction
    return HitDirection.UNCOUNTED


@dataclass(frozen=True)
class ZoneLayout:
    """Bundled zone classification tables, mostly for UI/report consumers."""

    row_of: dict[int, RowClass] = field(
        default_factory=lambda: {z: zone_row(z) for z in ALL_ZONES}
    )
    bounds_of: dict[int, BoundsClass] = field(
        default_factory=lambda: {z: zone_bounds(z) for z in ALL_ZONES}
    )
    in_system_zones: frozenset[int] = IN_SYSTEM_ZONES
    direction_sets: dict[str, frozenset[int]] = field(
        default_factory=lambda: dict(DIRECTION_SETS)
    )


def layout() -> ZoneLayout:
    return ZoneLayout()
