"""The ``vren`` command line: everything the library does, scriptable.

Exit codes: 0 success, 1 domain errors (bad input data, lint errors,
empty scopes), 2 usage errors.  Data goes to standard output or ``-o``;
diagnostics and progress go to standard error.  All outputs are
deterministic for fixed inputs and seeds, so goldens can be byte-compared.
"""

from __future__ import annotations

import functools
import json
import sys

import click

from . import learn, notation, stats, synth
from .diagnostics import VrenError
from .features import TaskKind, build_dataset, export_features
from .model import Team, coerce_field_value
from .synth import GeneratorProfile

_TASKS = {t.value: t for t in TaskKind}
_TEAMS = {"A": Team.A, "B": Team.B}


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise VrenError("E_IO", f"cannot read {path}: {exc.strerror or exc}") from exc


def _write_text(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
        return
    try:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise VrenError("E_IO", f"cannot write {output}: {exc.strerror or exc}") from exc


def _json_text(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def domain_errors(fn):
    """Map VrenError to exit code 1 with the code+message on stderr."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except VrenError as exc:
            click.echo(str(exc), err=True)
            sys.exit(1)

    return wrapper


@click.group()
@click.version_option(package_name="vren")
def main():
    """Volleyball rally notation tools: parse, lint, stats, predict."""


@main.command()
@click.argument("input", metavar="INPUT")
@click.option("-o", "--output", default=None, help="Output path (default stdout).")
@domain_errors
def parse(input, output):
    """Parse notation text and emit the JSON form."""
    matches = notation.parse_text(_read_text(input))
    docs = [notation.match_to_json(m) for m in matches]
    _write_text(_json_text(docs[0] if len(docs) == 1 else docs), output)


@main.command("format")
@click.argument("input", metavar="INPUT")
@click.option("-o", "--output", default=None, help="Output path (default stdout).")
@domain_errors
def format_cmd(input, output):
    """Rewrite notation text in canonical form."""
    matches = notation.parse_text(_read_text(input))
    _write_text(notation.serialize_corpus(matches), output)


@main.command()
@click.argument("input", metavar="INPUT")
@click.option("--json", "as_json", is_flag=True, help="Emit diagnostics as JSON.")
@domain_errors
def lint(input, as_json):
    """Check notation text; exit 1 when any error-severity finding exists."""
    matches = notation.parse_text(_read_text(input))
    findings = []
    for match in matches:
        for diag in notation.lint_match(match):
            findings.append((match.match_id, diag))
    if as_json:
        docs = [dict(match_id=mid, **d.to_json()) for mid, d in findings]
        sys.stdout.write(_json_text(docs))
    else:
        for mid, d in findings:
            where = f"rally {d.rally_no}" + (f" round {d.round_no}" if d.round_no else "")
            click.echo(f"{mid}: {d.severity.value}: {d.code}: {d.message} ({where})")
    if any(d.is_error for _, d in findings):
        sys.exit(1)


@main.command("stats")
@click.argument("input", metavar="INPUT")
@click.option("--team", type=click.Choice(["A", "B"]), default=None, help="Restrict to one team's rounds.")
@click.option("--view", type=click.Choice(["attack", "serve", "sets", "quality"]), default="attack")
@click.option("--serve", "serve_filter", type=click.Choice(["jump", "float", "hybrid"]), default=None,
              help="Serve-type filter for the serve view.")
@click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text")
@click.option("-o", "--output", default=None, help="Output path (default stdout).")
@domain_errors
def stats_cmd(input, team, view, serve_filter, fmt, output):
    """Aggregate statistics (attack table, serve receive, set shares)."""
    from .model import ServeType

    matches = notation.parse_text(_read_text(input))
    team_v = _TEAMS[team] if team else None

    if view == "attack":
        report = stats.attack_table(matches, team_v)
        text = {"text": stats.report_to_text, "csv": stats.report_to_csv, "json": stats.report_to_json}[fmt](report)
    elif view == "serve":
        serve_v = ServeType(serve_filter) if serve_filter else None
        counts = stats.serve_receive_distribution(matches, serve_v, team_v)
        if fmt == "csv":
            text = stats.zone_counts_to_csv(counts)
        elif fmt == "json":
            text = _json_text({str(z): n for z, n in counts.items()})
        else:
            label = serve_filter or "all serves"
            text = stats.zone_counts_to_text(counts, f"Receive zones ({label})")
    elif view == "sets":
        dist = stats.set_location_distribution(matches, team_v)
        if fmt == "csv":
            text = stats.distribution_to_csv(dist)
        elif fmt == "json":
            text = _json_text({loc.value: share for loc, share in sorted(dist.items(), key=lambda kv: kv[0].value)})
        else:
            lines = [f"  {loc.value:<10} {share:6.2f}%" for loc, share in sorted(dist.items(), key=lambda kv: -kv[1])]
            text = "Set locations:\n" + "\n".join(lines) + "\n"
    else:
        quality = stats.pass_set_quality(matches, team_v)
        if fmt == "json":
            text = _json_text(quality.to_json())
        elif fmt == "csv":
            q = quality.to_json()
            text = ",".join(q) + "\n" + ",".join(str(v).lower() if isinstance(v, bool) else str(v) for v in q.values()) + "\n"
        else:
            q = quality
            text = (
                f"passes: in={q.in_passes} out={q.out_passes}\n"
                f"sets:   in={q.in_sets} out={q.out_sets}\n"
                f"high-level criterion: {'met' if q.high_level else 'not met'}\n"
            )
    _write_text(text, output)


@main.command()
@click.option("-n", "--matches", "n_matches", type=int, default=1, show_default=True)
@click.option("-r", "--rallies", type=int, default=25, show_default=True, help="Rallies per match.")
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--profile", "profile_path", default=None, help="Generator profile JSON.")
@click.option("--signal", type=float, default=None, help="Override the learnable-signal strength.")
@click.option("-o", "--output", default=None, help="Output path (default stdout).")
@domain_errors
def generate(n_matches, rallies, seed, profile_path, signal, output):
    """Generate a seeded synthetic corpus in notation form."""
    import dataclasses

    profile = synth.load_profile(profile_path) if profile_path else GeneratorProfile()
    if signal is not None:
        profile = dataclasses.replace(profile, signal_strength=signal)
    corpus = synth.generate_corpus(profile, n_matches, rallies, seed)
    _write_text(notation.serialize_corpus(corpus), output)


@main.command()
@click.argument("input", metavar="INPUT")
@click.option("--task", type=click.Choice(sorted(_TASKS)), required=True)
@click.option("-k", type=int, default=4, show_default=True, help="Prior rounds per window.")
@click.option("--within-rally", is_flag=True, help="Do not let windows cross rally boundaries.")
@click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]), default="csv", show_default=True)
@click.option("-o", "--output", required=True, help="Feature file to write.")
@domain_errors
def encode(input, task, k, within_rally, fmt, output):
    """Encode notation into a feature file for training."""
    matches = notation.parse_text(_read_text(input))
    fm = build_dataset(matches, _TASKS[task], k=k, within_rally_only=within_rally)
    export_features(fm, output, fmt)
    click.echo(f"wrote {fm.n_examples} examples x {fm.width} features to {output}", err=True)


@main.command()
@click.argument("input", metavar="INPUT")
@click.option("--task", type=click.Choice(sorted(_TASKS)), required=True)
@click.option("-k", type=int, default=4, show_default=True)
@click.option("--within-rally", is_flag=True)
@click.option("--lr", type=float, default=0.1, show_default=True)
@click.option("--epochs", type=int, default=300, show_default=True)
@click.option("--l2", type=float, default=1e-4, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", required=True, help="Model file to write.")
@domain_errors
def train(input, task, k, within_rally, lr, epochs, l2, seed, output):
    """Train a logistic model on a notation corpus."""
    matches = notation.parse_text(_read_text(input))
    fm = build_dataset(matches, _TASKS[task], k=k, within_rally_only=within_rally)
    config = learn.TrainConfig(learning_rate=lr, epochs=epochs, l2=l2, seed=seed)
    if _TASKS[task] is TaskKind.RALLY_WINNER:
        model = learn.train_binary(fm, config)
    else:
        model = learn.train_multiclass(fm, config)
    learn.save_model(model, output)
    loss = model.loss_history[-1] if model.loss_history else float("nan")
    click.echo(f"trained {model.kind} model on {fm.n_examples} examples, final loss {loss:.6f}", err=True)


@main.command("eval")
@click.option("--model", "model_path", default=None, help="Trained model file.")
@click.option("--data", "data_path", default=None, help="Notation corpus to evaluate on.")
@click.option("--preds", "preds_path", default=None,
              help='JSON file {"probs": [...], "labels": [...]} or {"dists": [[...]], "labels": [...]}.')
@click.option("-o", "--output", default=None, help="Output path (default stdout).")
@domain_errors
def eval_cmd(model_path, data_path, preds_path, output):
    """Compute metrics from a model+corpus or from recorded predictions."""
    if preds_path is not None:
        if model_path or data_path:
            raise click.UsageError("--preds cannot be combined with --model/--data")
        doc = json.loads(_read_text(preds_path))
        if "probs" in doc:
            report = learn.evaluate_binary(doc["probs"], doc["labels"])
        elif "dists" in doc:
            report = learn.evaluate_categorical(doc["dists"], doc["labels"])
        else:
            raise click.UsageError("--preds file needs a 'probs' or 'dists' key")
    else:
        if not model_path or not data_path:
            raise click.UsageError("provide --model and --data, or --preds")
        model = learn.load_model(model_path)
        matches = notation.parse_text(_read_text(data_path))
        task = model.task or TaskKind.RALLY_WINNER
        fm = build_dataset(matches, task, k=model.k)
        probs = learn.predict_proba(model, fm.X)
        if model.kind == "binary":
            report = learn.evaluate_binary(probs, fm.y)
        else:
            report = learn.evaluate_categorical(probs, fm.y)
    _write_text(_json_text(report.to_json()), output)


@main.command()
@click.argument("model_path", metavar="MODEL")
@click.argument("input", metavar="INPUT")
@click.option("--match", "match_id", default=None, help="Match id (default: all matches).")
@click.option("--rally", "rally_no", type=int, default=None, help="Rally number (default: all rallies).")
@click.option("-o", "--output", default=None, help="Output path (default stdout).")
@domain_errors
def predict(model_path, input, match_id, rally_no, output):
    """Per-round rally-winner probabilities."""
    model = learn.load_model(model_path)
    matches = notation.parse_text(_read_text(input))
    out = []
    for match in matches:
        if match_id is not None and match.match_id != match_id:
            continue
        context: list = []
        rallies = []
        for rally in match.rallies:
            if rally_no is None or rally.rally_no == rally_no:
                probs = learn.per_round_win_prob(model, rally, tuple(context))
                rallies.append({"rally_no": rally.rally_no, "probs": probs})
            context.extend(rally.rounds)
        out.append({"match_id": match.match_id, "rallies": rallies})
    if not out:
        raise VrenError("E_EMPTY_SCOPE", f"no match named {match_id!r} in input")
    _write_text(_json_text(out), output)


@main.command()
@click.argument("model_path", metavar="MODEL")
@click.argument("input", metavar="INPUT")
@click.option("--match", "match_id", default=None, help="Match id (default: first match).")
@click.option("--rally", "rally_no", type=int, required=True, help="Rally number.")
@click.option("--round", "round_no", type=int, required=True, help="Round number (1-based).")
@click.option("--field", "fld", required=True, help="Round field to change.")
@click.option("--value", required=True,
              help="New value: enum token (e.g. quick, in_system), integer, true/false, or none.")
@click.option("-o", "--output", default=None, help="Output path (default stdout).")
@domain_errors
def whatif(model_path, input, match_id, rally_no, round_no, fld, value, output):
    """Counterfactual: change one field and report the probability shift."""
    model = learn.load_model(model_path)
    matches = notation.parse_text(_read_text(input))
    match = None
    for candidate in matches:
        if match_id is None or candidate.match_id == match_id:
            match = candidate
            break
    if match is None:
        raise VrenError("E_EMPTY_SCOPE", f"no match named {match_id!r} in input")

    rally = None
    context: list = []
    for candidate in match.rallies:
        if candidate.rally_no == rally_no:
            rally = candidate
            break
        context.extend(candidate.rounds)
    if rally is None:
        raise VrenError("E_BAD_INDEX", f"no rally {rally_no} in match {match.match_id!r}")

    typed = coerce_field_value(fld, _parse_value(value))
    result = learn.what_if(model, rally, round_no - 1, fld, typed, tuple(context))
    _write_text(_json_text(result.to_json()), output)


def _parse_value(raw: str):
    lowered = raw.lower()
    if lowered in ("none", "null"):
        return None
    if lowered == "true":
        return True
    if lowered == "false":
        return False
    try:
        return int(raw, 10)
    except ValueError:
        return raw


@main.command("serve")
@click.option("--port", type=int, default=None, help="Port (default $VREN_PORT or 8000).")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--model", "model_path", default=None, help="Rally-winner model to load.")
@click.option("--corpus", "corpus_path", default=None, help="Notation corpus to preload.")
@domain_errors
def serve_cmd(port, host, model_path, corpus_path):
    """Run the HTTP/JSON service for the coach console."""
    import os

    import uvicorn

    from .service import create_app

    if port is None:
        port = int(os.environ.get("VREN_PORT", "8000"))
    app = create_app(model_path=model_path, corpus_path=corpus_path)
    try:
        uvicorn.run(app, host=host, port=port)
    except OSError as exc:
        raise VrenError("E_IO", f"cannot bind {host}:{port}: {exc.strerror or exc}") from exc


if __name__ == "__main__":
    main()
