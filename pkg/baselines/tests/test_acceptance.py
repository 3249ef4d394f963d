"""Acceptance gate for the baselines package.

Each test exercises one stated criterion end to end and prints a
single PASS line with the measured evidence (run with ``-v -s``).
"""

import time

import torch

from vren_baselines import ArchSpec, build_model, train_eval
from vren_baselines.archs import TASK_OUTPUTS
from vren_baselines.metrics import REPORT_KEYS, binary_report, categorical_report


def _report_line(name: str, detail: str) -> None:
    print(f"SECONDARY {name}: PASS  [{detail}]")


def _max_delta(ours: dict, recorded: dict) -> float:
    worst = 0.0
    for key in REPORT_KEYS:
        a, b = ours[key], recorded[key]
        assert (a is None) == (b is None), f"{key}: null-ness differs"
        if a is not None:
            worst = max(worst, abs(a - b))
    return worst


def test_metric_parity(fixtures_dir, load_fixture):
    """Baselines metric code agrees with recorded vren eval reports.

    Shared predictions fixtures within 1e-9; the logistic family trained
    end-to-end on the same exported data within 1e-6.
    """
    preds = load_fixture("preds_binary.json")
    ours = binary_report(preds["probs"], preds["labels"])
    delta_binary = _max_delta(ours, load_fixture("primary_eval_preds_binary.json"))
    assert delta_binary <= 1e-9

    dists = load_fixture("preds_dists.json")
    ours = categorical_report(dists["dists"], dists["labels"])
    delta_dists = _max_delta(ours, load_fixture("primary_eval_preds_dists.json"))
    assert delta_dists <= 1e-9

    report = train_eval(
        ArchSpec("logistic"),
        "rally_winner",
        str(fixtures_dir / "train_winner_k2.csv"),
        str(fixtures_dir / "test_winner_k2.csv"),
    )
    recorded = load_fixture("primary_logistic_report.json")
    assert report["test"]["n_examples"] == recorded["n_examples"]
    delta_logistic = _max_delta(report["test"], recorded)
    assert delta_logistic <= 1e-6

    _report_line(
        "metric parity",
        f"fixture deltas {max(delta_binary, delta_dists):.1e} <= 1e-9, "
        f"logistic end-to-end delta {delta_logistic:.1e} <= 1e-6",
    )


def test_overfit_sanity(fixtures_dir):
    """CNN, LSTM, and Transformer memorize a 50-example toy set.

    Each family must reach at least 95% training accuracy within 500
    epochs, and the forward pass must emit one logit for the rally-
    winner task and nine for the set-type task.
    """
    accuracies = {}
    start = time.time()
    for family in ("cnn", "lstm", "transformer"):
        report = train_eval(
            ArchSpec(family), "rally_winner", str(fixtures_dir / "toy_task1.csv")
        )
        assert report["epochs"] == 500
        accuracy = report["train"]["binary_accuracy"]
        assert accuracy >= 95.0, f"{family} reached only {accuracy}%"
        accuracies[family] = accuracy
    elapsed = time.time() - start

    torch.manual_seed(0)
    x = torch.randn(4, 3, 7)
    for task, n_outputs in sorted(TASK_OUTPUTS.items()):
        model = build_model(ArchSpec("transformer"), 3, 7, n_outputs)
        model.eval()
        assert model(x).shape == (4, n_outputs)

    detail = ", ".join(f"{fam} {acc:.0f}%" for fam, acc in accuracies.items())
    _report_line(
        "overfit sanity",
        f"{detail} on 50 examples in {elapsed:.1f}s; shapes (batch,1)/(batch,9)",
    )
