"""train_eval workflow: configs, schema guards, reproducibility, CLI."""

import json

import pytest
from click.testing import CliRunner

from vren_baselines import ArchSpec, load_report, save_report, train_eval
from vren_baselines.cli import main
from vren_baselines.data import SchemaError
from vren_baselines.train import FitConfig, default_config

QUICK = FitConfig(epochs=30, learning_rate=1e-3, seed=3)


def toy(fixtures_dir) -> str:
    return str(fixtures_dir / "toy_task1.csv")


class TestFitConfig:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError, match="epochs"):
            FitConfig(epochs=0, learning_rate=0.1)
        with pytest.raises(ValueError, match="learning rate"):
            FitConfig(epochs=1, learning_rate=0.0)
        with pytest.raises(ValueError, match="l2"):
            FitConfig(epochs=1, learning_rate=0.1, l2=-1.0)

    def test_family_defaults(self):
        logistic = default_config("logistic")
        assert (logistic.epochs, logistic.learning_rate, logistic.l2) == (300, 0.1, 1e-4)
        deep = default_config("transformer")
        assert (deep.epochs, deep.learning_rate, deep.l2) == (500, 1e-3, 0.0)


class TestGuards:
    def test_unknown_task(self, fixtures_dir):
        with pytest.raises(ValueError, match="unknown task"):
            train_eval(ArchSpec("logistic"), "serve_type", toy(fixtures_dir))

    def test_labels_outside_task_range(self, fixtures_dir):
        """A nine-class export cannot be trained as the binary task."""
        with pytest.raises(SchemaError, match="labels outside 0..1"):
            train_eval(
                ArchSpec("logistic"),
                "rally_winner",
                str(fixtures_dir / "train_settype_k2.csv"),
                config=QUICK,
            )

    def test_jsonl_task_mismatch(self, fixtures_dir):
        with pytest.raises(SchemaError, match="exported for task"):
            train_eval(
                ArchSpec("logistic"),
                "set_type",
                str(fixtures_dir / "test_winner_k2.jsonl"),
                config=QUICK,
            )

    def test_train_test_window_mismatch(self, fixtures_dir, tmp_path):
        other = tmp_path / "k0.csv"
        other.write_text("r0_a,label,group\n1.0,0,m\n2.0,1,m\n", encoding="utf-8")
        with pytest.raises(SchemaError, match="does not match"):
            train_eval(
                ArchSpec("logistic"),
                "rally_winner",
                toy(fixtures_dir),
                str(other),
                config=QUICK,
            )

    def test_empty_training_file(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("r0_a,label,group\n", encoding="utf-8")
        with pytest.raises(SchemaError, match="no examples"):
            train_eval(ArchSpec("logistic"), "rally_winner", str(empty))


class TestReportShape:
    def test_fields_and_optional_test_block(self, fixtures_dir):
        report = train_eval(ArchSpec("cnn"), "rally_winner", toy(fixtures_dir), config=QUICK)
        assert report["family"] == "cnn"
        assert report["task"] == "rally_winner"
        assert report["seed"] == 3
        assert report["epochs"] == 30
        assert report["n_parameters"] > 0
        assert report["final_train_loss"] > 0
        assert report["test"] is None
        assert set(report["train"]) == {
            "n_examples",
            "binary_accuracy",
            "auc",
            "brier",
            "mae",
            "categorical_accuracy",
        }
        assert report["train"]["n_examples"] == 50

    def test_multiclass_report(self, fixtures_dir):
        report = train_eval(
            ArchSpec("lstm"), "set_type", str(fixtures_dir / "toy_task2.csv"), config=QUICK
        )
        assert report["train"]["categorical_accuracy"] is not None
        assert report["train"]["auc"] is None

    def test_save_load_round_trip(self, fixtures_dir, tmp_path):
        report = train_eval(ArchSpec("logistic"), "rally_winner", toy(fixtures_dir), config=QUICK)
        path = tmp_path / "report.json"
        save_report(report, str(path))
        assert load_report(str(path)) == report


class TestReproducibility:
    def test_same_seed_same_report(self, fixtures_dir):
        a = train_eval(ArchSpec("cnn"), "rally_winner", toy(fixtures_dir), config=QUICK)
        b = train_eval(ArchSpec("cnn"), "rally_winner", toy(fixtures_dir), config=QUICK)
        assert a == b

    def test_seed_changes_training(self, fixtures_dir):
        other = FitConfig(epochs=30, learning_rate=1e-3, seed=4)
        a = train_eval(ArchSpec("cnn"), "rally_winner", toy(fixtures_dir), config=QUICK)
        b = train_eval(ArchSpec("cnn"), "rally_winner", toy(fixtures_dir), config=other)
        assert a["final_train_loss"] != b["final_train_loss"]

    def test_logistic_ignores_seed(self, fixtures_dir):
        """Zero init means the logistic trajectory never touches an RNG."""
        a = train_eval(
            ArchSpec("logistic"),
            "rally_winner",
            toy(fixtures_dir),
            config=FitConfig(epochs=20, learning_rate=0.1, l2=1e-4, seed=0),
        )
        b = train_eval(
            ArchSpec("logistic"),
            "rally_winner",
            toy(fixtures_dir),
            config=FitConfig(epochs=20, learning_rate=0.1, l2=1e-4, seed=99),
        )
        assert a["final_train_loss"] == b["final_train_loss"]
        assert a["train"] == b["train"]


class TestCli:
    def run(self, *args, expect_exit=0):
        result = CliRunner().invoke(main, list(args))
        if result.exception and not isinstance(result.exception, SystemExit):
            raise result.exception
        assert result.exit_code == expect_exit, result.output
        return result

    def test_train_eval_stdout_report(self, fixtures_dir):
        result = self.run(
            "train-eval",
            "--family", "logistic",
            "--task", "rally_winner",
            "--train", toy(fixtures_dir),
            "--epochs", "25",
        )
        report = json.loads(result.stdout)
        assert report["family"] == "logistic"
        assert report["epochs"] == 25
        assert "parameters" in result.stderr

    def test_train_eval_writes_file(self, fixtures_dir, tmp_path):
        out = tmp_path / "report.json"
        self.run(
            "train-eval",
            "--family", "cnn",
            "--task", "rally_winner",
            "--train", toy(fixtures_dir),
            "--test", str(fixtures_dir / "test_winner_k2.csv"),
            "--epochs", "20",
            "--seed", "5",
            "-o", str(out),
        )
        report = load_report(str(out))
        assert report["seed"] == 5
        assert report["test"]["n_examples"] == 32

    def test_schema_error_exits_one(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("oops\n1\n", encoding="utf-8")
        result = self.run(
            "train-eval",
            "--family", "logistic",
            "--task", "rally_winner",
            "--train", str(bad),
            expect_exit=1,
        )
        assert "E_SCHEMA" in result.stderr
        assert result.stdout == ""

    def test_eval_preds_matches_recorded_report(self, fixtures_dir, load_fixture):
        result = self.run("eval-preds", str(fixtures_dir / "preds_binary.json"))
        assert json.loads(result.stdout) == load_fixture("primary_eval_preds_binary.json")

    def test_eval_preds_needs_probs_or_dists(self, tmp_path):
        bad = tmp_path / "p.json"
        bad.write_text('{"labels": [1]}', encoding="utf-8")
        result = self.run("eval-preds", str(bad), expect_exit=1)
        assert "E_SCHEMA" in result.stderr
