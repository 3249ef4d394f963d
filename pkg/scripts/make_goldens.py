#!/usr/bin/env python3
"""Regenerate the pinned golden outputs under tests/fixtures/goldens/.

Run from the repository root after any deliberate output-format change:

    python3 scripts/make_goldens.py

Every file written here is byte-compared by the test suite, so regenerate
only when the new output has been re-checked by hand.
"""

from __future__ import annotations

import pathlib
import sys

from click.testing import CliRunner

ROOT = pathlib.Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "tests" / "fixtures"
GOLDENS = FIXTURES / "goldens"
GOLDEN_VREN = FIXTURES / "golden.vren"

sys.path.insert(0, str(ROOT / "src"))

from vren.cli import main as cli  # noqa: E402
from vren.features import TaskKind, build_dataset  # noqa: E402
from vren.learn import TrainConfig, save_model, train_binary  # noqa: E402
from vren.synth import GeneratorProfile, generate_corpus  # noqa: E402


def run_cli(args: list[str]) -> str:
    result = CliRunner().invoke(cli, args, catch_exceptions=False)
    if result.exit_code != 0:
        raise SystemExit(f"vren {' '.join(args)} failed:\n{result.output}")
    return result.output


def pinned_winner_model():
    """The reference rally-winner model: fixed corpus, fixed training run."""
    profile = GeneratorProfile(signal_strength=0.2, team_a_edge=0.12)
    corpus = generate_corpus(profile, 12, 10, seed=5)
    fm = build_dataset(corpus, TaskKind.RALLY_WINNER, k=4)
    return train_binary(fm, TrainConfig(epochs=60))


def main() -> None:
    GOLDENS.mkdir(parents=True, exist_ok=True)
    src = str(GOLDEN_VREN)

    run_cli(["parse", src, "-o", str(GOLDENS / "parse_golden.json")])
    run_cli(["format", src, "-o", str(GOLDENS / "format_golden.vren")])
    run_cli(["stats", src, "--team", "A", "--view", "attack", "--format", "csv",
             "-o", str(GOLDENS / "stats_attack_A.csv")])
    run_cli(["encode", src, "--task", "rally_winner", "-k", "1",
             "--format", "csv", "-o", str(GOLDENS / "encode_k1.csv")])

    model_path = GOLDENS / "winner_model.json"
    save_model(pinned_winner_model(), str(model_path))

    run_cli(["whatif", str(model_path), src, "--rally", "8", "--round", "2",
             "--field", "set_location", "--value", "quick",
             "-o", str(GOLDENS / "whatif_dball_quick.json")])

    for path in sorted(GOLDENS.iterdir()):
        print(f"wrote {path.relative_to(ROOT)} ({path.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
