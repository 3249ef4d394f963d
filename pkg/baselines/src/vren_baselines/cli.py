"""Command-line entry points for the baseline families."""

from __future__ import annotations

import functools
import json
import sys

import click

from . import metrics
from .archs import FAMILIES, TASK_OUTPUTS, ArchSpec
from .data import SchemaError
from .train import default_config, save_report, train_eval


def domain_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SchemaError as exc:
            click.echo(f"{exc.code}: {exc}", err=True)
            sys.exit(1)
        except (ValueError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


@click.group()
@click.version_option(version="0.1.0")
def main():
    """Deep baselines over exported vren feature files."""


@main.command("train-eval")
@click.option("--family", type=click.Choice(FAMILIES), required=True)
@click.option("--task", type=click.Choice(sorted(TASK_OUTPUTS)), required=True)
@click.option("--train", "train_path", required=True, help="Training feature file (csv/jsonl).")
@click.option("--test", "test_path", default=None, help="Held-out feature file.")
@click.option("--epochs", type=int, default=None, help="Override the family default.")
@click.option("--lr", type=float, default=None, help="Override the family default.")
@click.option("--l2", type=float, default=None, help="Override the family default.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", default=None, help="Report path (default stdout).")
@domain_errors
def train_eval_cmd(family, task, train_path, test_path, epochs, lr, l2, seed, output):
    """Train one family on a feature file and write an evaluation report."""
    config = default_config(family)
    config = type(config)(
        epochs=epochs if epochs is not None else config.epochs,
        learning_rate=lr if lr is not None else config.learning_rate,
        l2=l2 if l2 is not None else config.l2,
        seed=seed,
    )
    report = train_eval(ArchSpec(family), task, train_path, test_path, config)
    click.echo(
        f"{family}: {report['n_parameters']} parameters, "
        f"final loss {report['final_train_loss']:.6f}",
        err=True,
    )
    text = json.dumps(report, indent=1) + "\n"
    if output is None:
        click.echo(text, nl=False)
    else:
        save_report(report, output)


@main.command("eval-preds")
@click.argument("preds_path", metavar="PREDS")
@click.option("-o", "--output", default=None, help="Report path (default stdout).")
@domain_errors
def eval_preds(preds_path, output):
    """Score a recorded predictions file {"probs"|"dists", "labels"}."""
    with open(preds_path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if "probs" in doc:
        report = metrics.binary_report(doc["probs"], doc["labels"])
    elif "dists" in doc:
        report = metrics.categorical_report(doc["dists"], doc["labels"])
    else:
        raise SchemaError(f"{preds_path}: needs a 'probs' or 'dists' key")
    text = json.dumps(report, indent=1) + "\n"
    if output is None:
        click.echo(text, nl=False)
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
