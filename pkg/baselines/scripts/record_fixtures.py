"""Regenerate baselines/tests/fixtures by driving the installed vren CLI.

The baselines package consumes the toolkit only through its published
artifacts, so every fixture here is produced by a ``vren`` subprocess:
synthetic corpora, exported feature files, and the evaluation reports
the parity tests compare against.  Run it after any intentional change
to the toolkit's export or metric behavior:

    python3 baselines/scripts/record_fixtures.py
"""

from __future__ import annotations

import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

HERE = Path(__file__).resolve().parent
FIXTURES = HERE.parent / "tests" / "fixtures"
REPO_ROOT = HERE.parent.parent
SHARED_PREDS = [
    REPO_ROOT / "tests" / "fixtures" / "preds_binary.json",
    REPO_ROOT / "tests" / "fixtures" / "preds_dists.json",
]

TOY_ROWS = 50


def vren(*args: str) -> None:
    result = subprocess.run(["vren", *args], capture_output=True, text=True)
    if result.returncode != 0:
        sys.exit(f"vren {' '.join(args)} failed:\n{result.stderr}")


def write_toy(source: Path, dest: Path, binary: bool) -> None:
    """First TOY_ROWS rows with distinct feature vectors (memorizable)."""
    lines = source.read_text(encoding="utf-8").splitlines()
    header, rows = lines[0], lines[1:]
    seen: set[str] = set()
    kept: list[str] = []
    labels: set[str] = set()
    for row in rows:
        features = row.rsplit(",", 2)[0]
        if features in seen:
            continue
        seen.add(features)
        kept.append(row)
        labels.add(row.rsplit(",", 2)[1])
        if len(kept) == TOY_ROWS:
            break
    if len(kept) < TOY_ROWS:
        sys.exit(f"{source}: only {len(kept)} distinct rows; enlarge the corpus")
    if binary and labels < {"0", "1"}:
        sys.exit(f"{source}: toy slice is single-class; enlarge the corpus")
    dest.write_text("\n".join([header, *kept]) + "\n", encoding="utf-8")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    train_vren = FIXTURES / "train.vren"
    test_vren = FIXTURES / "test.vren"

    vren("generate", "-n", "6", "-r", "10", "--seed", "101", "--signal", "0.2",
         "-o", str(train_vren))
    vren("generate", "-n", "2", "-r", "8", "--seed", "202", "--signal", "0.2",
         "-o", str(test_vren))

    vren("encode", str(train_vren), "--task", "rally_winner", "-k", "2",
         "-o", str(FIXTURES / "train_winner_k2.csv"))
    vren("encode", str(test_vren), "--task", "rally_winner", "-k", "2",
         "-o", str(FIXTURES / "test_winner_k2.csv"))
    vren("encode", str(test_vren), "--task", "rally_winner", "-k", "2",
         "--format", "jsonl", "-o", str(FIXTURES / "test_winner_k2.jsonl"))
    vren("encode", str(train_vren), "--task", "set_type", "-k", "2",
         "-o", str(FIXTURES / "train_settype_k2.csv"))

    write_toy(FIXTURES / "train_winner_k2.csv", FIXTURES / "toy_task1.csv", binary=True)
    write_toy(FIXTURES / "train_settype_k2.csv", FIXTURES / "toy_task2.csv", binary=False)

    for preds in SHARED_PREDS:
        shutil.copy(preds, FIXTURES / preds.name)
    vren("eval", "--preds", str(FIXTURES / "preds_binary.json"),
         "-o", str(FIXTURES / "primary_eval_preds_binary.json"))
    vren("eval", "--preds", str(FIXTURES / "preds_dists.json"),
         "-o", str(FIXTURES / "primary_eval_preds_dists.json"))

    # The end-to-end parity target: the toolkit's own logistic learner
    # trained and scored on the same corpora the feature files came from.
    with tempfile.TemporaryDirectory() as tmp:
        model_path = Path(tmp) / "winner_k2_model.json"
        vren("train", str(train_vren), "--task", "rally_winner", "-k", "2",
             "--lr", "0.1", "--epochs", "300", "--l2", "1e-4", "--seed", "0",
             "-o", str(model_path))
        vren("eval", "--model", str(model_path), "--data", str(test_vren),
             "-o", str(FIXTURES / "primary_logistic_report.json"))

    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
