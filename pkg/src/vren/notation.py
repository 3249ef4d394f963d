"""Concrete textual grammar and JSON form for rally transcriptions.

The text format is line oriented, one record per line:

    match "demo" teamA="Alpha" teamB="Bravo" level=college
    rally 1 winner=A win=kill lose=dig_error
    round 1 team=A serve=jump recv_from=9 recv_at=9 pass=in pass_to=13 \
set=dball set_from=13 hit=hit hit_from=6 blockers=2 touch=n target=8

Records are ``key=value`` fields after a positional keyword and number,
so hand-edited files diff cleanly and typos surface as errors instead of
being ignored.  ``#`` starts a comment; blank lines are skipped.  The
canonical form written by :func:`serialize_match` uses a fixed field
order (team, serve, receive, pass, set, hit, block, target), lowercase
tokens, bare integers for zones, and LF newlines, so serialization is
byte-stable.  The grammar is documented in docs/LANGUAGE.md and the JSON
shape in docs/schema/match.schema.json.
"""

from __future__ import annotations

import re
from typing import Any, Callable, Iterator

from .court import PassRating, SetLocation, check_zone
from .diagnostics import (
    Diagnostic,
    DuplicateFieldError,
    EnumValueError,
    InvalidModelError,
    MissingHeaderError,
    NotationSyntaxError,
    SchemaError,
    VrenError,
    ZoneRangeError,
)
from .model import (
    HitType,
    Level,
    Match,
    Rally,
    Round,
    ServeType,
    SetSub,
    Team,
    validate_match,
)

# ---------------------------------------------------------------------------
# token tables (surface token <-> enum)

_SERVE_TOKENS = {s.value: s for s in ServeType}
_PASS_TOKENS = {"in": PassRating.IN_SYSTEM, "out": PassRating.OUT_OF_SYSTEM, "over": PassRating.OVERPASS}
_SET_TOKENS = {
    "outside": SetLocation.OUTSIDE,
    "quick": SetLocation.QUICK,
    "oppo": SetLocation.OPPO,
    "bic": SetLocation.BIC,
    "dball": SetLocation.D_BALL,
    "dump": SetLocation.DUMP,
    "overpass": SetLocation.OVERPASS,
    "none": SetLocation.NONE,
    "blocked": SetLocation.BLOCKED,
}
_SET_SUB_TOKENS = {"thirty_one": SetSub.THIRTY_ONE}
_HIT_TOKENS = {h.value: h for h in HitType}
_TEAM_TOKENS = {"A": Team.A, "B": Team.B}
_LEVEL_TOKENS = {lv.value: lv for lv in Level}

_SERVE_SURFACE = {v: k for k, v in _SERVE_TOKENS.items()}
_PASS_SURFACE = {v: k for k, v in _PASS_TOKENS.items()}
_SET_SURFACE = {v: k for k, v in _SET_TOKENS.items()}
_SET_SUB_SURFACE = {v: k for k, v in _SET_SUB_TOKENS.items()}
_HIT_SURFACE = {v: k for k, v in _HIT_TOKENS.items()}

_REASON_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
_TOKEN_RE = re.compile(r'[A-Za-z_][A-Za-z0-9_]*="[^"\n]*"|"[^"\n]*"|[^\s"]+')


def _enum_field(name: str, table: dict) -> Callable[[str, int], Any]:
    def convert(raw: str, line: int) -> Any:
        try:
            return table[raw]
        except KeyError:
            raise EnumValueError(
                f"{name}={raw!r} is not one of {sorted(table)}", line
            ) from None

    return convert


def _zone_field(name: str) -> Callable[[str, int], int]:
    def convert(raw: str, line: int) -> int:
        try:
            value = int(raw, 10)
        except ValueError:
            raise NotationSyntaxError(f"{name} expects a zone number, got {raw!r}", line) from None
        try:
            return check_zone(value)
        except ZoneRangeError as exc:
            raise ZoneRangeError(exc.message, line) from None

    return convert


def _blockers_field(raw: str, line: int) -> int:
    try:
        value = int(raw, 10)
    except ValueError:
        raise NotationSyntaxError(f"blockers expects an integer, got {raw!r}", line) from None
    if value not in (0, 1, 2, 3):
        raise EnumValueError(f"blockers={value} outside 0..3", line)
    return value


def _touch_field(raw: str, line: int) -> bool:
    if raw == "y":
        return True
    if raw == "n":
        return False
    raise EnumValueError(f"touch={raw!r} must be y or n", line)


def _reason_field(name: str) -> Callable[[str, int], str]:
    def convert(raw: str, line: int) -> str:
        if not _REASON_RE.match(raw):
            raise NotationSyntaxError(
                f"{name}={raw!r} must be a lowercase token ([a-z0-9_])", line
            )
        return raw

    return convert


# Canonical round-record field order; also the full set of legal keys.
_ROUND_FIELDS: tuple[tuple[str, str, Callable[[str, int], Any]], ...] = (
    ("team", "team", _enum_field("team", _TEAM_TOKENS)),
    ("serve", "serve_type", _enum_field("serve", _SERVE_TOKENS)),
    ("serve_from", "serve_from", _zone_field("serve_from")),
    ("recv_from", "recv_move_from", _zone_field("recv_from")),
    ("recv_at", "recv_at", _zone_field("recv_at")),
    ("pass", "pass_rating", _enum_field("pass", _PASS_TOKENS)),
    ("pass_to", "pass_to", _zone_field("pass_to")),
    ("set", "set_location", _enum_field("set", _SET_TOKENS)),
    ("set_sub", "set_sub", _enum_field("set_sub", _SET_SUB_TOKENS)),
    ("set_from", "set_from", _zone_field("set_from")),
    ("hit", "hit_type", _enum_field("hit", _HIT_TOKENS)),
    ("hit_from", "hit_from", _zone_field("hit_from")),
    ("blockers", "num_blockers", _blockers_field),
    ("touch", "block_touch", _touch_field),
    ("target", "target", _zone_field("target")),
)
_ROUND_KEY_TO_FIELD = {key: (attr, conv) for key, attr, conv in _ROUND_FIELDS}

_RALLY_FIELDS = {
    "winner": ("winner", _enum_field("winner", _TEAM_TOKENS)),
    "win": ("winning_reason", _reason_field("win")),
    "lose": ("losing_reason", _reason_field("lose")),
}


def _scan_tokens(line: str, line_no: int) -> list[str]:
    """Split a record into tokens, respecting double-quoted values."""
    tokens: list[str] = []
    pos = 0
    for m in _TOKEN_RE.finditer(line):
        if line[pos : m.start()].strip():
            raise NotationSyntaxError(f"unparseable text {line[pos:m.start()].strip()!r}", line_no)
        tokens.append(m.group(0))
        pos = m.end()
    if line[pos:].strip():
        raise NotationSyntaxError(f"unparseable text {line[pos:].strip()!r}", line_no)
    return tokens


def _split_kv(token: str, line_no: int) -> tuple[str, str, bool]:
    """Return (key, raw value, was_quoted) for a key=value token."""
    key, sep, raw = token.partition("=")
    if not sep or not key:
        raise NotationSyntaxError(f"expected key=value, got {token!r}", line_no)
    quoted = raw.startswith('"')
    if quoted:
        raw = raw[1:-1]
    return key, raw, quoted


def _parse_int(raw: str, what: str, line_no: int) -> int:
    try:
        value = int(raw, 10)
    except ValueError:
        raise NotationSyntaxError(f"{what} expects an integer, got {raw!r}", line_no) from None
    if value < 1:
        raise NotationSyntaxError(f"{what} must be positive, got {value}", line_no)
    return value


class _MatchBuilder:
    def __init__(self, match_id: str, team_a: str, team_b: str, level: Level):
        self.match_id = match_id
        self.team_a = team_a
        self.team_b = team_b
        self.level = level
        self.rallies: list[Rally] = []
        self.pending: dict | None = None

    def flush_rally(self) -> None:
        if self.pending is not None:
            info = self.pending
            self.rallies.append(
                Rally(
                    rally_no=info["rally_no"],
                    winner=info["winner"],
                    winning_reason=info["winning_reason"],
                    losing_reason=info["losing_reason"],
                    rounds=tuple(info["rounds"]),
                )
            )
            self.pending = None

    def build(self) -> Match:
        self.flush_rally()
        return Match(
            match_id=self.match_id,
            team_a=self.team_a,
            team_b=self.team_b,
            level=self.level,
            rallies=tuple(self.rallies),
        )


def _parse_header(tokens: list[str], line_no: int) -> _MatchBuilder:
    if len(tokens) < 2 or not tokens[1].startswith('"'):
        raise NotationSyntaxError('match header expects: match "<id>" teamA="..." teamB="..."', line_no)
    match_id = tokens[1][1:-1]
    team_a: str | None = None
    team_b: str | None = None
    level = Level.COLLEGE
    seen: set[str] = set()
    for token in tokens[2:]:
        key, raw, quoted = _split_kv(token, line_no)
        if key in seen:
            raise DuplicateFieldError(f"duplicate field {key!r}", line_no)
        seen.add(key)
        if key == "teamA":
            team_a = raw
        elif key == "teamB":
            team_b = raw
        elif key == "level":
            if quoted:
                raise NotationSyntaxError("level must be a bare token", line_no)
            level = _enum_field("level", _LEVEL_TOKENS)(raw, line_no)
        else:
            raise NotationSyntaxError(f"unknown header field {key!r}", line_no)
    if team_a is None or team_b is None:
        raise NotationSyntaxError("match header requires teamA= and teamB=", line_no)
    return _MatchBuilder(match_id, team_a, team_b, level)


def _parse_rally_line(tokens: list[str], line_no: int) -> dict:
    if len(tokens) < 2:
        raise NotationSyntaxError("rally record expects: rally <no> winner=.. win=.. lose=..", line_no)
    info: dict = {"rally_no": _parse_int(tokens[1], "rally number", line_no), "rounds": []}
    seen: set[str] = set()
    for token in tokens[2:]:
        key, raw, quoted = _split_kv(token, line_no)
        if quoted:
            raise NotationSyntaxError(f"{key} must be a bare token", line_no)
        if key in seen:
            raise DuplicateFieldError(f"duplicate field {key!r}", line_no)
        seen.add(key)
        if key not in _RALLY_FIELDS:
            raise NotationSyntaxError(f"unknown rally field {key!r}", line_no)
        attr, conv = _RALLY_FIELDS[key]
        info[attr] = conv(raw, line_no)
    for key, (attr, _) in _RALLY_FIELDS.items():
        if attr not in info:
            raise NotationSyntaxError(f"rally record missing {key}=", line_no)
    return info


def _parse_round_line(tokens: list[str], line_no: int) -> Round:
    if len(tokens) < 2:
        raise NotationSyntaxError("round record expects: round <no> team=.. ...", line_no)
    values: dict = {"round_no": _parse_int(tokens[1], "round number", line_no)}
    seen: set[str] = set()
    for token in tokens[2:]:
        key, raw, quoted = _split_kv(token, line_no)
        if quoted:
            raise NotationSyntaxError(f"{key} must be a bare value", line_no)
        if key in seen:
            raise DuplicateFieldError(f"duplicate field {key!r}", line_no)
        seen.add(key)
        if key not in _ROUND_KEY_TO_FIELD:
            raise NotationSyntaxError(f"unknown round field {key!r}", line_no)
        attr, conv = _ROUND_KEY_TO_FIELD[key]
        values[attr] = conv(raw, line_no)
    if "team" not in values:
        raise NotationSyntaxError("round record missing team=", line_no)
    try:
        return Round(**values)
    except VrenError as exc:
        exc.line = line_no
        raise


def parse_text(source: str) -> list[Match]:
    """Parse a document that may hold several match blocks."""
    matches: list[Match] = []
    builder: _MatchBuilder | None = None

    for line_no, raw_line in enumerate(source.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = _scan_tokens(line, line_no)
        keyword = tokens[0]
        if keyword == "match":
            if builder is not None:
                matches.append(builder.build())
            builder = _parse_header(tokens, line_no)
        elif keyword == "rally":
            if builder is None:
                raise MissingHeaderError("rally record before any match header", line_no)
            builder.flush_rally()
            builder.pending = _parse_rally_line(tokens, line_no)
        elif keyword == "round":
            if builder is None:
                raise MissingHeaderError("round record before any match header", line_no)
            if builder.pending is None:
                raise NotationSyntaxError("round record outside a rally", line_no)
            builder.pending["rounds"].append(_parse_round_line(tokens, line_no))
        else:
            raise NotationSyntaxError(f"unknown record type {keyword!r}", line_no)

    if builder is None:
        raise MissingHeaderError("document has no match header", None)
    matches.append(builder.build())
    return matches


def parse_match(source: str) -> Match:
    """Parse a document holding exactly one match."""
    matches = parse_text(source)
    if len(matches) != 1:
        raise NotationSyntaxError(f"expected exactly one match, found {len(matches)}")
    return matches[0]


def _check_string(value: str, what: str) -> str:
    if '"' in value or "\n" in value:
        raise InvalidModelError(f"{what} may not contain quotes or newlines: {value!r}")
    return value


def _check_reason(value: str, what: str) -> str:
    if not _REASON_RE.match(value):
        raise InvalidModelError(f"{what} must be a lowercase token, got {value!r}")
    return value


def _round_record(rnd: Round) -> str:
    parts = [f"round {rnd.round_no}", f"team={rnd.team.value}"]
    if rnd.serve_type is not None:
        parts.append(f"serve={_SERVE_SURFACE[rnd.serve_type]}")
    if rnd.serve_from is not None:
        parts.append(f"serve_from={rnd.serve_from}")
    if rnd.recv_move_from is not None:
        parts.append(f"recv_from={rnd.recv_move_from}")
    if rnd.recv_at is not None:
        parts.append(f"recv_at={rnd.recv_at}")
    if rnd.pass_rating is not None:
        parts.append(f"pass={_PASS_SURFACE[rnd.pass_rating]}")
    if rnd.pass_to is not None:
        parts.append(f"pass_to={rnd.pass_to}")
    parts.append(f"set={_SET_SURFACE[rnd.set_location]}")
    if rnd.set_sub is not None:
        parts.append(f"set_sub={_SET_SUB_SURFACE[rnd.set_sub]}")
    if rnd.set_from is not None:
        parts.append(f"set_from={rnd.set_from}")
    parts.append(f"hit={_HIT_SURFACE[rnd.hit_type]}")
    if rnd.hit_from is not None:
        parts.append(f"hit_from={rnd.hit_from}")
    parts.append(f"blockers={rnd.num_blockers}")
    parts.append(f"touch={'y' if rnd.block_touch else 'n'}")
    if rnd.target is not None:
        parts.append(f"target={rnd.target}")
    return " ".join(parts)


def serialize_match(match: Match) -> str:
    """Render the canonical text form; rejects models with error lint."""
    errors = [d for d in validate_match(match) if d.is_error]
    if errors:
        first = errors[0]
        raise InvalidModelError(f"match has {len(errors)} error diagnostics, first: {first.code} ({first.message})")

    lines = [
        'match "{}" teamA="{}" teamB="{}" level={}'.format(
            _check_string(match.match_id, "match_id"),
            _check_string(match.team_a, "team_a"),
            _check_string(match.team_b, "team_b"),
            match.level.value,
        )
    ]
    for rally in match.rallies:
        lines.append(
            "rally {} winner={} win={} lose={}".format(
                rally.rally_no,
                rally.winner.value,
                _check_reason(rally.winning_reason, "winning_reason"),
                _check_reason(rally.losing_reason, "losing_reason"),
            )
        )
        for rnd in rally.rounds:
            lines.append(_round_record(rnd))
    return "\n".join(lines) + "\n"


def serialize_corpus(matches: list[Match]) -> str:
    return "".join(serialize_match(m) for m in matches)


def lint_match(match: Match) -> list[Diagnostic]:
    """All structural and semantic findings for a match."""
    return validate_match(match)


# ---------------------------------------------------------------------------
# JSON form.  Strict on both ends: unknown keys and wrong types are
# E_SCHEMA, so a "12" where a zone number belongs never slips through.

_ROUND_JSON_OPTIONAL = {
    "serve_type",
    "serve_from",
    "recv_move_from",
    "recv_at",
    "pass_rating",
    "pass_to",
    "set_sub",
    "set_from",
    "hit_from",
    "target",
}
_ROUND_JSON_KEYS = {
    "round_no",
    "team",
    "serve_type",
    "serve_from",
    "recv_move_from",
    "recv_at",
    "pass_rating",
    "pass_to",
    "set_location",
    "set_sub",
    "set_from",
    "hit_type",
    "hit_from",
    "num_blockers",
    "block_touch",
    "target",
}


def round_to_json(rnd: Round) -> dict:
    return {
        "round_no": rnd.round_no,
        "team": rnd.team.value,
        "serve_type": None if rnd.serve_type is None else rnd.serve_type.value,
        "serve_from": rnd.serve_from,
        "recv_move_from": rnd.recv_move_from,
        "recv_at": rnd.recv_at,
        "pass_rating": None if rnd.pass_rating is None else rnd.pass_rating.value,
        "pass_to": rnd.pass_to,
        "set_location": rnd.set_location.value,
        "set_sub": None if rnd.set_sub is None else rnd.set_sub.value,
        "set_from": rnd.set_from,
        "hit_type": rnd.hit_type.value,
        "hit_from": rnd.hit_from,
        "num_blockers": rnd.num_blockers,
        "block_touch": rnd.block_touch,
        "target": rnd.target,
    }


def match_to_json(match: Match) -> dict:
    return {
        "match_id": match.match_id,
        "team_a": match.team_a,
        "team_b": match.team_b,
        "level": match.level.value,
        "rallies": [
            {
                "rally_no": rally.rally_no,
                "winner": rally.winner.value,
                "winning_reason": rally.winning_reason,
                "losing_reason": rally.losing_reason,
                "rounds": [round_to_json(rnd) for rnd in rally.rounds],
            }
            for rally in match.rallies
        ],
    }


def _require(doc: dict, key: str, where: str) -> Any:
    if key not in doc:
        raise SchemaError(f"{where}: missing required field {key!r}")
    return doc[key]


def _strict_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}: expected an integer, got {value!r}")
    return value


def _strict_str(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{where}: expected a string, got {value!r}")
    return value


def _strict_bool(value: Any, where: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(f"{where}: expected a boolean, got {value!r}")
    return value


def _json_enum(value: Any, table: dict, where: str) -> Any:
    _strict_str(value, where)
    if value not in table:
        raise SchemaError(f"{where}: {value!r} is not one of {sorted(table)}")
    return table[value]


_JSON_ENUM_TABLES = {
    "team": {t.value: t for t in Team},
    "serve_type": {s.value: s for s in ServeType},
    "pass_rating": {p.value: p for p in PassRating},
    "set_location": {s.value: s for s in SetLocation},
    "set_sub": {s.value: s for s in SetSub},
    "hit_type": {h.value: h for h in HitType},
    "level": {lv.value: lv for lv in Level},
}

_ROUND_ZONE_KEYS = ("serve_from", "recv_move_from", "recv_at", "pass_to", "set_from", "hit_from", "target")


def round_from_json(doc: Any, where: str = "round") -> Round:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    unknown = set(doc) - _ROUND_JSON_KEYS
    if unknown:
        raise SchemaError(f"{where}: unknown fields {sorted(unknown)}")

    values: dict = {
        "round_no": _strict_int(_require(doc, "round_no", where), f"{where}.round_no"),
        "team": _json_enum(_require(doc, "team", where), _JSON_ENUM_TABLES["team"], f"{where}.team"),
    }
    for key in _ROUND_ZONE_KEYS:
        value = doc.get(key)
        if value is not None:
            value = _strict_int(value, f"{where}.{key}")
            try:
                check_zone(value)
            except ZoneRangeError as exc:
                raise SchemaError(f"{where}.{key}: {exc.message}") from None
        values[key] = value
    for key in ("serve_type", "pass_rating", "set_sub"):
        value = doc.get(key)
        values[key] = None if value is None else _json_enum(value, _JSON_ENUM_TABLES[key], f"{where}.{key}")
    if "set_location" in doc:
        values["set_location"] = _json_enum(doc["set_location"], _JSON_ENUM_TABLES["set_location"], f"{where}.set_location")
    if "hit_type" in doc:
        values["hit_type"] = _json_enum(doc["hit_type"], _JSON_ENUM_TABLES["hit_type"], f"{where}.hit_type")
    if "num_blockers" in doc:
        blockers = _strict_int(doc["num_blockers"], f"{where}.num_blockers")
        if blockers not in (0, 1, 2, 3):
            raise SchemaError(f"{where}.num_blockers: {blockers} outside 0..3")
        values["num_blockers"] = blockers
    if "block_touch" in doc:
        values["block_touch"] = _strict_bool(doc["block_touch"], f"{where}.block_touch")
    return Round(**values)


def match_from_json(doc: Any) -> Match:
    if not isinstance(doc, dict):
        raise SchemaError("match: expected an object")
    unknown = set(doc) - {"match_id", "team_a", "team_b", "level", "rallies"}
    if unknown:
        raise SchemaError(f"match: unknown fields {sorted(unknown)}")

    rallies_doc = _require(doc, "rallies", "match")
    if not isinstance(rallies_doc, list):
        raise SchemaError("match.rallies: expected an array")

    rallies = []
    for i, rally_doc in enumerate(rallies_doc):
        where = f"rallies[{i}]"
        if not isinstance(rally_doc, dict):
            raise SchemaError(f"{where}: expected an object")
        unknown = set(rally_doc) - {"rally_no", "winner", "winning_reason", "losing_reason", "rounds"}
        if unknown:
            raise SchemaError(f"{where}: unknown fields {sorted(unknown)}")
        rounds_doc = _require(rally_doc, "rounds", where)
        if not isinstance(rounds_doc, list):
            raise SchemaError(f"{where}.rounds: expected an array")
        rallies.append(
            Rally(
                rally_no=_strict_int(_require(rally_doc, "rally_no", where), f"{where}.rally_no"),
                winner=_json_enum(_require(rally_doc, "winner", where), _JSON_ENUM_TABLES["team"], f"{where}.winner"),
                winning_reason=_strict_str(_require(rally_doc, "winning_reason", where), f"{where}.winning_reason"),
                losing_reason=_strict_str(_require(rally_doc, "losing_reason", where), f"{where}.losing_reason"),
                rounds=tuple(
                    round_from_json(rd, f"{where}.rounds[{j}]") for j, rd in enumerate(rounds_doc)
                ),
            )
        )

    level_doc = doc.get("level", Level.COLLEGE.value)
    return Match(
        match_id=_strict_str(_require(doc, "match_id", "match"), "match.match_id"),
        team_a=_strict_str(_require(doc, "team_a", "match"), "match.team_a"),
        team_b=_strict_str(_require(doc, "team_b", "match"), "match.team_b"),
        level=_json_enum(level_doc, _JSON_ENUM_TABLES["level"], "match.level"),
        rallies=tuple(rallies),
    )


def iter_rounds(match: Match) -> Iterator[tuple[Rally, Round]]:
    """All (rally, round) pairs of a match, in play order."""
    for rally in match.rallies:
        for rnd in rally.rounds:
            yield rally, rnd
