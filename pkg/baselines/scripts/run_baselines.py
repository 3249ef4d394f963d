"""Run all four model families over one exported dataset.

Writes one EvalReport JSON per family and prints a results table
comparing them on the shared metric definitions.

    python3 baselines/scripts/run_baselines.py \
        --train baselines/tests/fixtures/train_winner_k2.csv \
        --test  baselines/tests/fixtures/test_winner_k2.csv \
        --task rally_winner -o /tmp/reports

The recorded fixtures above are desk-scale (a few hundred rounds), so
expect deep-family test metrics to hover near chance there; the table
is about exercising the pipeline, not about leaderboard numbers.
"""

from __future__ import annotations

import os

import click

from vren_baselines import ArchSpec, save_report, train_eval
from vren_baselines.archs import FAMILIES, TASK_OUTPUTS
from vren_baselines.train import FitConfig, default_config

COLUMNS = ("binary_accuracy", "auc", "brier", "mae", "categorical_accuracy")


def _cell(value) -> str:
    if value is None:
        return "--"
    return f"{value:.4f}"


@click.command()
@click.option("--train", "train_path", required=True, help="Training feature file.")
@click.option("--test", "test_path", default=None, help="Held-out feature file.")
@click.option("--task", type=click.Choice(sorted(TASK_OUTPUTS)), default="rally_winner",
              show_default=True)
@click.option("--epochs", type=int, default=None, help="Override deep-family epochs.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--outdir", required=True, help="Directory for report JSONs.")
def main(train_path, test_path, task, epochs, seed, outdir):
    os.makedirs(outdir, exist_ok=True)
    reports = {}
    for family in FAMILIES:
        config = default_config(family)
        config = FitConfig(
            epochs=epochs if epochs is not None and family != "logistic" else config.epochs,
            learning_rate=config.learning_rate,
            l2=config.l2,
            seed=seed,
        )
        click.echo(f"training {family} ({config.epochs} epochs)...", err=True)
        report = train_eval(ArchSpec(family), task, train_path, test_path, config)
        save_report(report, os.path.join(outdir, f"{family}.json"))
        reports[family] = report

    scope = "test" if test_path else "train"
    click.echo(f"\n{task} ({scope} metrics)")
    header = f"{'family':<12} {'params':>8} " + " ".join(f"{c:>10}" for c in COLUMNS)
    click.echo(header)
    click.echo("-" * len(header))
    for family, report in reports.items():
        block = report[scope]
        cells = " ".join(f"{_cell(block[c]):>10}" for c in COLUMNS)
        click.echo(f"{family:<12} {report['n_parameters']:>8} {cells}")
    click.echo(f"\nreports written to {outdir}")


if __name__ == "__main__":
    main()
