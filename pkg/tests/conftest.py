from __future__ import annotations

import pathlib

import pytest

from vren.features import TaskKind, build_dataset
from vren.learn import TrainConfig, train_binary
from vren.notation import parse_match
from vren.synth import GeneratorProfile, generate_corpus

FIXTURES = pathlib.Path(__file__).parent / "fixtures"
GOLDENS = FIXTURES / "goldens"


@pytest.fixture(scope="session")
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture(scope="session")
def golden_text() -> str:
    return (FIXTURES / "golden.vren").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def golden_match(golden_text):
    return parse_match(golden_text)


@pytest.fixture(scope="session")
def synth_corpus():
    """Small deterministic corpus with the learnable structure enabled."""
    profile = GeneratorProfile(signal_strength=0.2, team_a_edge=0.12)
    return generate_corpus(profile, n_matches=12, rallies_per_match=10, seed=5)


@pytest.fixture(scope="session")
def winner_model(synth_corpus):
    fm = build_dataset(synth_corpus, TaskKind.RALLY_WINNER, k=4)
    return train_binary(fm, TrainConfig(epochs=60))


@pytest.fixture(scope="session")
def winner_model_path(winner_model, tmp_path_factory) -> str:
    from vren.learn import save_model

    path = tmp_path_factory.mktemp("models") / "winner.json"
    save_model(winner_model, str(path))
    return str(path)
