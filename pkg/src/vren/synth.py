"""Seeded synthetic match generator calibrated to published label rates.

The generative process is deliberately simple — it is a test-data
factory, not a volleyball simulator — but its marginal frequencies are
calibrated: set-location, serve-type, and hit-outcome draws hit their
profile targets in expectation, receive zones cluster by serve type
(jump serves are taken short in zones 2-4, floats deep in 7-9), and
quick sets never happen out of system, which both mirrors real play and
gives the set-type predictor honest signal.

Randomness comes from numpy's PCG64 so that identical seeds produce
identical corpora on any platform; per-match streams are derived as
SeedSequence([master_seed, match_index]).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .court import IN_SYSTEM_ZONES, PassRating, SetLocation, pass_rating_for
from .diagnostics import BadProfileError
from .model import HitType, Level, Match, Rally, Round, ServeType, SetSub, Team

_SUM_TOL = 1e-9

_SET_KEYS = ("outside", "quick", "oppo", "bic", "d_ball", "dump")
_HIT_KEYS = ("hit", "blocked", "junk", "free_or_over")
_JUNK_SPLIT = (HitType.ROLL_SHOT, HitType.TIP, HitType.OFF_SPEED)

# Where each attacker takes their swing (doc-layout zones: front row
# 11..15 left-to-right, back row 6..10; the thirty-one goes to 14).
_HIT_FROM = {
    "outside": 11,
    "quick": 13,
    "thirty_one": 14,
    "oppo": 15,
    "bic": 7,
    "d_ball": 9,
}

_OUT_ZONES = tuple(range(16, 27))
_IN_ZONES = tuple(range(1, 16))
_SERVE_ZONES = tuple(range(17, 22))


def _check_family(name: str, probs: dict, keys: tuple) -> None:
    if set(probs) != set(keys):
        raise BadProfileError(f"{name} must have exactly the keys {sorted(keys)}")
    if any(p < 0 for p in probs.values()):
        raise BadProfileError(f"{name} contains a negative probability")
    total = sum(probs.values())
    if abs(total - 1.0) > _SUM_TOL:
        raise BadProfileError(f"{name} sums to {total!r}, not 1")


@dataclass(frozen=True)
class GeneratorProfile:
    """Marginal targets and process knobs for the generator."""

    set_location: dict[str, float] = field(
        default_factory=lambda: {
            "outside": 0.427,
            "d_ball": 0.063,
            "oppo": 0.205,
            "quick": 0.205,
            "bic": 0.08,
            "dump": 0.02,
        }
    )
    serve_type: dict[str, float] = field(
        default_factory=lambda: {"jump": 0.771, "float": 0.179, "hybrid": 0.05}
    )
    hit_outcome: dict[str, float] = field(
        default_factory=lambda: {"hit": 0.598, "blocked": 0.158, "junk": 0.172, "free_or_over": 0.072}
    )
    receive_zones: dict[str, dict[int, float]] = field(
        default_factory=lambda: {
            "jump": {2: 0.30, 3: 0.35, 4: 0.25, 7: 0.04, 8: 0.03, 9: 0.03},
            "float": {2: 0.04, 3: 0.03, 4: 0.03, 7: 0.30, 8: 0.35, 9: 0.25},
            "hybrid": {2: 0.15, 3: 0.15, 4: 0.10, 7: 0.20, 8: 0.20, 9: 0.20},
        }
    )
    rally_length: dict[int, float] = field(
        default_factory=lambda: {
            # geometric(0.4) truncated to 1..12 rounds; mean about 2.5
            length: 0.4 * 0.6 ** (length - 1) for length in range(1, 13)
        }
    )
    in_system_rate: float = 0.7
    overpass_rate: float = 0.012
    thirty_one_rate: float = 0.5
    out_conversion_rate: float = 0.6
    kill_rate: float = 0.7  # terminal swings landing in bounds
    signal_strength: float = 0.0  # 0 disables the learnable signal
    team_a_edge: float = 0.0  # terminal kill-rate edge for team A

    def __post_init__(self) -> None:
        _check_family("set_location", self.set_location, _SET_KEYS)
        _check_family("serve_type", self.serve_type, tuple(s.value for s in ServeType))
        _check_family("hit_outcome", self.hit_outcome, _HIT_KEYS)
        for serve, zones in self.receive_zones.items():
            _check_family(f"receive_zones[{serve}]", zones, tuple(zones))
            if any(z < 1 or z > 15 for z in zones):
                raise BadProfileError(f"receive_zones[{serve}] must use in-bounds zones")
        lengths = self.rally_length
        if not lengths or any(n < 1 or n > 12 for n in lengths):
            raise BadProfileError("rally_length must cover lengths within 1..12")
        if any(p < 0 for p in lengths.values()) or sum(lengths.values()) <= 0:
            raise BadProfileError("rally_length weights must be non-negative and not all zero")
        for name in ("in_system_rate", "overpass_rate", "thirty_one_rate",
                     "out_conversion_rate", "kill_rate", "signal_strength"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise BadProfileError(f"{name}={value!r} outside [0, 1]")
        if not -0.5 <= self.team_a_edge <= 0.5:
            raise BadProfileError(f"team_a_edge={self.team_a_edge!r} outside [-0.5, 0.5]")
        # Conditional set distributions must stay valid probabilities.
        self._conditional_set_probs()

    def _conditional_set_probs(self) -> tuple[dict[str, float], dict[str, float]]:
        """Set distributions given pass rating.

        Quick sets are impossible out of system, so to keep the overall
        marginals on target, quick mass moves in-system and the other
        labels rebalance:  T = s*P_in + (1-s)*P_out with P_out(quick)=0.
        """
        T = self.set_location
        s = self.in_system_rate
        if s <= 0 or s >= 1:
            # degenerate split: single conditional equal to the target
            return dict(T), dict(T)
        p_in = {"quick": T["quick"] / s}
        p_out = {"quick": 0.0}
        if p_in["quick"] > 1.0:
            raise BadProfileError("quick share exceeds the in-system rate")
        for key in _SET_KEYS:
            if key == "quick":
                continue
            p_out[key] = T[key] / (1.0 - T["quick"])
            p_in[key] = (T[key] - (1.0 - s) * p_out[key]) / s
            if p_in[key] < 0:
                raise BadProfileError(f"set_location[{key!r}] incompatible with in_system_rate")
        return p_in, p_out

    def _conditional_hit_probs(self) -> tuple[dict[str, float], dict[str, float]]:
        """Hit-outcome distributions given pass rating.

        Out-of-system swings convert worse: a tenth of the hit mass
        shifts to junk, balanced so the mixture stays on target.
        """
        T = self.hit_outcome
        s = self.in_system_rate
        shift = min(0.1, T["junk"], T["hit"])
        if s <= 0 or s >= 1:
            return dict(T), dict(T)
        p_in = dict(T)
        p_out = dict(T)
        p_in["hit"] = T["hit"] + (1.0 - s) * shift
        p_out["hit"] = T["hit"] - s * shift
        p_in["junk"] = T["junk"] - (1.0 - s) * shift
        p_out["junk"] = T["junk"] + s * shift
        if min(min(p_in.values()), min(p_out.values())) < 0:
            raise BadProfileError("hit_outcome incompatible with in_system_rate")
        return p_in, p_out

    def to_json(self) -> dict:
        return {
            "set_location": dict(self.set_location),
            "serve_type": dict(self.serve_type),
            "hit_outcome": dict(self.hit_outcome),
            "receive_zones": {k: {str(z): p for z, p in v.items()} for k, v in self.receive_zones.items()},
            "rally_length": {str(n): p for n, p in self.rally_length.items()},
            "in_system_rate": self.in_system_rate,
            "overpass_rate": self.overpass_rate,
            "thirty_one_rate": self.thirty_one_rate,
            "out_conversion_rate": self.out_conversion_rate,
            "kill_rate": self.kill_rate,
            "signal_strength": self.signal_strength,
            "team_a_edge": self.team_a_edge,
        }

    @staticmethod
    def from_json(doc: dict) -> "GeneratorProfile":
        kwargs = dict(doc)
        if "receive_zones" in kwargs:
            kwargs["receive_zones"] = {
                k: {int(z): p for z, p in v.items()} for k, v in kwargs["receive_zones"].items()
            }
        if "rally_length" in kwargs:
            kwargs["rally_length"] = {int(n): p for n, p in kwargs["rally_length"].items()}
        try:
            return GeneratorProfile(**kwargs)
        except TypeError as exc:
            raise BadProfileError(f"bad profile document: {exc}") from None


def load_profile(path: str) -> GeneratorProfile:
    with open(path, "r", encoding="utf-8") as fh:
        return GeneratorProfile.from_json(json.load(fh))


def _pick(rng: np.random.Generator, probs: dict):
    """Draw one key from a {key: weight} table (cumulative inversion)."""
    keys = list(probs)
    weights = np.array([probs[k] for k in keys], dtype=float)
    cdf = np.cumsum(weights / weights.sum())
    return keys[int(np.searchsorted(cdf, rng.random(), side="right"))]


class _RallyFactory:
    def __init__(self, profile: GeneratorProfile, rng: np.random.Generator):
        self.profile = profile
        self.rng = rng
        self.set_in, self.set_out = profile._conditional_set_probs()
        self.hit_in, self.hit_out = profile._conditional_hit_probs()

    def _receive_fields(self, serve: str) -> dict:
        zones = self.profile.receive_zones[serve]
        return {
            "serve_type": ServeType(serve),
            "serve_from": int(self.rng.integers(_SERVE_ZONES[0], _SERVE_ZONES[-1] + 1)),
            "recv_move_from": _pick(self.rng, zones),
            "recv_at": _pick(self.rng, zones),
        }

    def _sample_pass(self) -> tuple[PassRating, int]:
        if self.rng.random() < self.profile.in_system_rate:
            pass_to = int(self.rng.choice(sorted(IN_SYSTEM_ZONES)))
        else:
            pool = [z for z in _IN_ZONES if z not in IN_SYSTEM_ZONES]
            pass_to = int(self.rng.choice(pool))
        return pass_rating_for(pass_to), pass_to

    def _sample_target(self, in_bounds_rate: float) -> int:
        if self.rng.random() < in_bounds_rate:
            return int(self.rng.choice(_IN_ZONES))
        return int(self.rng.choice(_OUT_ZONES))

    def _overpass_round(self, round_no: int, team: Team, serve: str | None) -> Round:
        fields_: dict = {"round_no": round_no, "team": team}
        if serve is not None:
            fields_.update(self._receive_fields(serve))
        fields_.update(
            pass_rating=PassRating.OVERPASS,
            pass_to=int(self.rng.choice(_IN_ZONES)),
            set_location=SetLocation.OVERPASS,
            hit_type=HitType.OVERPASS,
        )
        return Round(**fields_)

    def _round(self, round_no: int, team: Team, serve: str | None, terminal: bool) -> tuple[Round, bool | None]:
        """Build one round.

        Returns (round, attack_won): attack_won is None for rounds that
        do not decide the rally, True when the possession team wins it,
        False when it loses it.
        """
        rng = self.rng
        profile = self.profile
        if rng.random() < profile.overpass_rate:
            rnd = self._overpass_round(round_no, team, serve)
            return rnd, (False if terminal else None)

        fields_: dict = {"round_no": round_no, "team": team}
        if serve is not None:
            fields_.update(self._receive_fields(serve))

        rating, pass_to = self._sample_pass()
        fields_.update(pass_rating=rating, pass_to=pass_to)

        in_system = rating is PassRating.IN_SYSTEM
        set_key = _pick(rng, self.set_in if in_system else self.set_out)
        fields_["set_location"] = SetLocation(set_key)
        hit_key = set_key
        if set_key == "quick" and rng.random() < profile.thirty_one_rate:
            fields_["set_sub"] = SetSub.THIRTY_ONE
            hit_key = "thirty_one"
        if in_system:
            set_from = pass_to
        elif rng.random() < profile.out_conversion_rate:
            set_from = int(rng.choice(sorted(IN_SYSTEM_ZONES)))
        else:
            set_from = pass_to
        fields_["set_from"] = set_from

        if set_key == "dump":
            outcome = "dump"
            fields_["hit_type"] = HitType.DUMP
            fields_["hit_from"] = set_from
        else:
            outcome = _pick(rng, self.hit_in if in_system else self.hit_out)
            fields_["hit_from"] = _HIT_FROM[hit_key]
            if outcome == "hit":
                fields_["hit_type"] = HitType.HIT
            elif outcome == "blocked":
                fields_["hit_type"] = HitType.BLOCKED
            elif outcome == "junk":
                fields_["hit_type"] = _JUNK_SPLIT[int(rng.integers(len(_JUNK_SPLIT)))]
            else:
                fields_["hit_type"] = HitType.FREE_BALL if rng.random() < 0.9 else HitType.OVERPASS
                fields_["hit_from"] = None

        swing = outcome in ("hit", "junk", "dump")
        if swing:
            in_rate = profile.kill_rate if terminal else 0.9
            if terminal:
                # Optional learnable structure, both off by default.  A
                # perfectly symmetric process makes the winner an XOR of
                # team and outcome, which a linear model cannot see, so
                # the edge and signal are deliberately team-asymmetric.
                in_rate += profile.team_a_edge if team is Team.A else -profile.team_a_edge
                if profile.signal_strength and team is Team.A:
                    if set_key == "quick":
                        in_rate += profile.signal_strength
                    elif set_key == "d_ball":
                        in_rate -= profile.signal_strength
                in_rate = min(0.95, max(0.05, in_rate))
            fields_["target"] = self._sample_target(in_rate)

        if outcome == "blocked":
            fields_["num_blockers"] = _pick(rng, {1: 0.30, 2: 0.55, 3: 0.15})
            fields_["block_touch"] = True
        elif swing and set_key != "dump":
            fields_["num_blockers"] = _pick(rng, {0: 0.15, 1: 0.25, 2: 0.50, 3: 0.10})
            if fields_["num_blockers"] >= 1:
                fields_["block_touch"] = bool(rng.random() < 0.25) and not terminal

        rnd = Round(**fields_)
        if not terminal:
            return rnd, None
        if outcome == "blocked" or not swing:
            return rnd, False
        return rnd, rnd.target is not None and rnd.target <= 15

    def rally(self, rally_no: int, receiving: Team) -> Rally:
        length = int(_pick(self.rng, self.profile.rally_length))
        serve = _pick(self.rng, self.profile.serve_type)
        rounds = []
        attack_won = False
        for i in range(length):
            team = receiving if i % 2 == 0 else receiving.other
            rnd, attack_won = self._round(i + 1, team, serve if i == 0 else None, terminal=i == length - 1)
            rounds.append(rnd)
        last = rounds[-1]
        winner = last.team if attack_won else last.team.other
        if attack_won:
            reasons = ("kill", "other")
        elif last.hit_type is HitType.BLOCKED:
            reasons = ("block", "other")
        elif last.target is not None:
            reasons = ("other", "attack_error")
        else:
            reasons = ("other", "other")
        return Rally(
            rally_no=rally_no,
            winner=winner,
            winning_reason=reasons[0],
            losing_reason=reasons[1],
            rounds=tuple(rounds),
        )


def generate_match(
    profile: GeneratorProfile,
    n_rallies: int,
    seed,
    match_id: str = "synth-0000",
    team_a: str = "Synth A",
    team_b: str = "Synth B",
) -> Match:
    """Generate one lint-clean match; identical inputs → identical match.

    ``seed`` may be anything numpy's SeedSequence accepts (an int or a
    sequence of ints).
    """
    if n_rallies < 0:
        raise BadProfileError(f"n_rallies must be >= 0, got {n_rallies}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    factory = _RallyFactory(profile, rng)
    rallies = []
    for i in range(n_rallies):
        receiving = Team.A if i % 2 == 0 else Team.B
        rallies.append(factory.rally(i + 1, receiving))
    return Match(
        match_id=match_id,
        team_a=team_a,
        team_b=team_b,
        level=Level.SYNTHETIC,
        rallies=tuple(rallies),
    )


def generate_corpus(
    profile: GeneratorProfile,
    n_matches: int,
    rallies_per_match: int,
    seed: int,
) -> list[Match]:
    """Matches with per-match streams SeedSequence([seed, index])."""
    return [
        generate_match(
            profile,
            rallies_per_match,
            seed=[seed, index],
            match_id=f"synth-{index:04d}",
        )
        for index in range(n_matches)
    ]
