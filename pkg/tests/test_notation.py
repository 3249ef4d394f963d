"""Text grammar, canonical serialization, and the strict JSON codec."""

import json

import pytest
from hypothesis import given, settings

import strategies
from vren.diagnostics import (
    DuplicateFieldError,
    EnumValueError,
    InvalidModelError,
    MissingHeaderError,
    NotationSyntaxError,
    SchemaError,
    VrenError,
    ZoneRangeError,
)
from vren.model import Level, Match, Rally, Round, Team
from vren.notation import (
    iter_rounds,
    lint_match,
    match_from_json,
    match_to_json,
    parse_match,
    parse_text,
    round_from_json,
    round_to_json,
    serialize_corpus,
    serialize_match,
)

HEADER = 'match "m1" teamA="Alpha" teamB="Beta" level=college'
RALLY = "rally 1 winner=A win=kill lose=other"
ROUND = "round 1 team=A serve=jump recv_at=2 pass=in pass_to=12 set=outside set_from=12 hit=hit hit_from=11 blockers=1 touch=n target=5"


def doc(*lines: str) -> str:
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# happy path

def test_parse_minimal_document():
    match = parse_match(doc(HEADER, RALLY, ROUND))
    assert match.match_id == "m1"
    assert match.team_a == "Alpha" and match.team_b == "Beta"
    assert match.level is Level.COLLEGE
    assert len(match.rallies) == 1
    rnd = match.rallies[0].rounds[0]
    assert rnd.team is Team.A and rnd.pass_to == 12 and rnd.target == 5


def test_parse_multiple_matches():
    text = doc(HEADER, RALLY, ROUND) + doc(
        'match "m2" teamA="X" teamB="Y"', RALLY, ROUND.replace("team=A", "team=B")
    )
    matches = parse_text(text)
    assert [m.match_id for m in matches] == ["m1", "m2"]
    assert matches[1].level is Level.COLLEGE  # default when omitted


def test_comments_and_blank_lines_ignored():
    match = parse_match(doc("# leading comment", "", HEADER, "  # indented comment", RALLY, ROUND))
    assert len(match.rallies) == 1


def test_golden_round_trip(golden_text, golden_match):
    assert parse_match(serialize_match(golden_match)) == golden_match
    # the fixture body (sans comments) is already canonical
    body = "".join(
        line + "\n" for line in golden_text.splitlines() if line.strip() and not line.startswith("#")
    )
    assert serialize_match(golden_match) == body


def test_serialize_corpus_concatenates(golden_match):
    two = serialize_corpus([golden_match, golden_match])
    assert parse_text(two) == [golden_match, golden_match]


def test_iter_rounds_in_play_order(golden_match):
    pairs = list(iter_rounds(golden_match))
    assert len(pairs) == 40
    assert [p[1].round_no for p in pairs[:4]] == [1, 2, 1, 2]


# ---------------------------------------------------------------------------
# parse errors carry codes and line numbers

@pytest.mark.parametrize(
    "lines, exc, line_no",
    [
        ((HEADER, RALLY, ROUND.replace("target=5", "target=31")), ZoneRangeError, 3),
        ((HEADER, RALLY, ROUND.replace("set=outside", "set=banana")), EnumValueError, 3),
        ((HEADER, RALLY, ROUND + " target=6"), DuplicateFieldError, 3),
        ((HEADER, RALLY.replace("winner=A", "winner=C")), EnumValueError, 2),
        ((HEADER, RALLY, ROUND.replace("blockers=1", "blockers=7")), EnumValueError, 3),
        ((HEADER, RALLY, ROUND.replace("touch=n", "touch=x")), EnumValueError, 3),
        ((HEADER, RALLY, ROUND.replace("pass=in", "pass=good")), EnumValueError, 3),
        ((HEADER, RALLY, ROUND + " color=red"), NotationSyntaxError, 3),
        ((HEADER, RALLY.replace(" win=kill", "")), NotationSyntaxError, 2),
        ((HEADER, RALLY.replace("kill", "Kill")), NotationSyntaxError, 2),
        ((HEADER, RALLY, "round one team=A"), NotationSyntaxError, 3),
        ((HEADER, RALLY, 'round 1 team=A set="outside"'), NotationSyntaxError, 3),
        ((HEADER, "rally 1 winner=A win=kill lose=other extra"), NotationSyntaxError, 2),
        ((HEADER, RALLY, "hello 1"), NotationSyntaxError, 3),
        ((HEADER + ' teamA="again"', RALLY), DuplicateFieldError, 1),
        (("match m1 teamA=\"A\" teamB=\"B\"",), NotationSyntaxError, 1),
    ],
)
def test_parse_error_positions(lines, exc, line_no):
    with pytest.raises(exc) as err:
        parse_text(doc(*lines))
    assert err.value.line == line_no
    assert err.value.code.startswith("E_")


def test_round_before_rally_is_syntax_error():
    with pytest.raises(NotationSyntaxError):
        parse_text(doc(HEADER, ROUND))


def test_rally_before_header_is_missing_header():
    with pytest.raises(MissingHeaderError) as err:
        parse_text(doc(RALLY, ROUND))
    assert err.value.line == 1


def test_empty_document_is_missing_header():
    with pytest.raises(MissingHeaderError):
        parse_text("# only a comment\n")


def test_parse_match_requires_exactly_one():
    with pytest.raises(NotationSyntaxError):
        parse_match(doc(HEADER, RALLY, ROUND) + doc('match "m2" teamA="X" teamB="Y"', RALLY, ROUND))


def test_str_of_error_mentions_code_and_line():
    try:
        parse_text(doc(HEADER, RALLY, ROUND.replace("target=5", "target=31")))
    except VrenError as exc:
        assert "E_ZONE_RANGE" in str(exc)
        assert "3" in str(exc)
    else:
        pytest.fail("expected a zone error")


# ---------------------------------------------------------------------------
# serializer contracts

def test_serialize_rejects_error_lint():
    bad = Match(
        match_id="m",
        team_a="A",
        team_b="B",
        rallies=(Rally(rally_no=1, winner=Team.A, winning_reason="kill", losing_reason="other", rounds=()),),
    )
    with pytest.raises(InvalidModelError):
        serialize_match(bad)


def test_serialize_rejects_quoted_strings():
    m = Match(match_id='has"quote', team_a="A", team_b="B", rallies=())
    with pytest.raises(InvalidModelError):
        serialize_match(m)


def test_serialize_rejects_uppercase_reason():
    m = Match(
        match_id="m",
        team_a="A",
        team_b="B",
        rallies=(
            Rally(
                rally_no=1,
                winner=Team.A,
                winning_reason="Kill",
                losing_reason="other",
                rounds=(Round(round_no=1, team=Team.A),),
            ),
        ),
    )
    with pytest.raises(InvalidModelError):
        serialize_match(m)


def test_lint_match_reports_for_each_rally(golden_match):
    assert lint_match(golden_match) == []


# ---------------------------------------------------------------------------
# JSON codec

def test_json_round_trip(golden_match):
    doc_ = match_to_json(golden_match)
    json.dumps(doc_)  # must be serializable as-is
    assert match_from_json(doc_) == golden_match


def test_json_obeys_published_schema(golden_match, fixtures_dir):
    import jsonschema

    schema_path = fixtures_dir.parent.parent / "docs" / "schema" / "match.schema.json"
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft7Validator.check_schema(schema)
    jsonschema.validate(match_to_json(golden_match), schema)

    from vren.synth import GeneratorProfile, generate_corpus

    for match in generate_corpus(GeneratorProfile(), 3, 5, seed=8):
        jsonschema.validate(match_to_json(match), schema)


def test_round_json_keys_complete(golden_match):
    rd = golden_match.rallies[0].rounds[0]
    doc_ = round_to_json(rd)
    assert set(doc_) == {
        "round_no", "team", "serve_type", "serve_from", "recv_move_from", "recv_at",
        "pass_rating", "pass_to", "set_location", "set_sub", "set_from", "hit_type",
        "hit_from", "num_blockers", "block_touch", "target",
    }
    assert doc_["team"] == "A" and doc_["serve_type"] == "jump"


def test_round_from_json_defaults():
    rd = round_from_json({"round_no": 1, "team": "B"})
    assert rd.set_location.value == "none"
    assert rd.hit_type.value == "none"
    assert rd.num_blockers == 0 and rd.block_touch is False


@pytest.mark.parametrize(
    "payload",
    [
        {"round_no": 1, "team": "A", "shoes": 2},
        {"round_no": 1},
        {"round_no": "1", "team": "A"},
        {"round_no": True, "team": "A"},
        {"round_no": 1, "team": "A", "target": "9"},
        {"round_no": 1, "team": "A", "target": 31},
        {"round_no": 1, "team": "A", "num_blockers": 9},
        {"round_no": 1, "team": "A", "block_touch": "yes"},
        {"round_no": 1, "team": "A", "set_location": "banana"},
        "not an object",
    ],
)
def test_round_from_json_strict(payload):
    with pytest.raises(SchemaError):
        round_from_json(payload)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(extra=1),
        lambda d: d.pop("match_id"),
        lambda d: d.update(rallies="nope"),
        lambda d: d["rallies"][0].update(bogus=1),
        lambda d: d["rallies"][0].pop("winner"),
        lambda d: d["rallies"][0].update(rounds={}),
    ],
)
def test_match_from_json_strict(golden_match, mutate):
    doc_ = match_to_json(golden_match)
    mutate(doc_)
    with pytest.raises(SchemaError):
        match_from_json(doc_)


def test_match_from_json_level_defaults_to_college(golden_match):
    doc_ = match_to_json(golden_match)
    del doc_["level"]
    assert match_from_json(doc_).level is Level.COLLEGE


# ---------------------------------------------------------------------------
# properties: every constructible valid match survives both codecs

@settings(max_examples=60, deadline=None)
@given(strategies.matches())
def test_text_round_trip_property(match):
    assert parse_match(serialize_match(match)) == match


@settings(max_examples=60, deadline=None)
@given(strategies.matches())
def test_json_round_trip_property(match):
    assert match_from_json(json.loads(json.dumps(match_to_json(match)))) == match


@settings(max_examples=60, deadline=None)
@given(strategies.matches())
def test_serialization_is_stable(match):
    once = serialize_match(match)
    assert serialize_match(parse_match(once)) == once
