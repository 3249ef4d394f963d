"""Feature-file reader: happy paths on recorded exports, schema rejections."""

import numpy as np
import pytest

from vren_baselines.data import FeatureFile, SchemaError, read_features


class TestCsvRead:
    def test_shapes_and_window(self, fixtures_dir):
        ff = read_features(str(fixtures_dir / "train_winner_k2.csv"))
        assert ff.k == 2
        assert ff.seq_len == 3
        assert ff.width == ff.seq_len * ff.block_width
        assert ff.X.shape == (ff.n_examples, ff.width)
        assert ff.X.dtype == np.float64
        assert ff.y.dtype == np.int64
        assert len(ff.groups) == ff.n_examples
        assert ff.n_examples > 50

    def test_csv_carries_no_task(self, fixtures_dir):
        ff = read_features(str(fixtures_dir / "train_winner_k2.csv"))
        assert ff.task is None

    def test_sequences_time_order(self, fixtures_dir):
        """sequences() puts the oldest round first and r0 last."""
        ff = read_features(str(fixtures_dir / "test_winner_k2.csv"))
        seqs = ff.sequences()
        assert seqs.shape == (ff.n_examples, 3, ff.block_width)
        np.testing.assert_array_equal(seqs[:, -1, :], ff.X[:, -ff.block_width :])
        np.testing.assert_array_equal(seqs[:, 0, :], ff.X[:, : ff.block_width])
        assert ff.columns[0].startswith(f"r{ff.k}_")
        assert ff.columns[-1].startswith("r0_")

    def test_binary_labels(self, fixtures_dir):
        ff = read_features(str(fixtures_dir / "train_winner_k2.csv"))
        assert set(np.unique(ff.y)) == {0, 1}


class TestJsonlRead:
    def test_matches_csv_twin(self, fixtures_dir):
        """The same export in both formats decodes to the same dataset."""
        csv_ff = read_features(str(fixtures_dir / "test_winner_k2.csv"))
        jsonl_ff = read_features(str(fixtures_dir / "test_winner_k2.jsonl"))
        np.testing.assert_array_equal(csv_ff.X, jsonl_ff.X)
        np.testing.assert_array_equal(csv_ff.y, jsonl_ff.y)
        assert csv_ff.groups == jsonl_ff.groups
        assert csv_ff.columns == jsonl_ff.columns
        assert (csv_ff.k, csv_ff.block_width) == (jsonl_ff.k, jsonl_ff.block_width)

    def test_jsonl_carries_task(self, fixtures_dir):
        ff = read_features(str(fixtures_dir / "test_winner_k2.jsonl"))
        assert ff.task == "rally_winner"


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestSchemaRejections:
    def test_missing_file(self, tmp_path):
        with pytest.raises(SchemaError, match="cannot read"):
            read_features(str(tmp_path / "nope.csv"))

    def test_empty_file(self, tmp_path):
        with pytest.raises(SchemaError, match="empty"):
            read_features(_write(tmp_path, "e.csv", ""))

    def test_header_missing_label_group(self, tmp_path):
        with pytest.raises(SchemaError, match="label,group"):
            read_features(_write(tmp_path, "h.csv", "r0_a,r0_b,label\n1,2,0\n"))

    def test_non_window_column(self, tmp_path):
        with pytest.raises(SchemaError, match="unexpected feature column"):
            read_features(_write(tmp_path, "c.csv", "foo,label,group\n1,0,m\n"))

    def test_gap_in_window(self, tmp_path):
        text = "r2_a,r0_a,label,group\n1,2,0,m\n"
        with pytest.raises(SchemaError, match="contiguous"):
            read_features(_write(tmp_path, "g.csv", text))

    def test_uneven_block_widths(self, tmp_path):
        text = "r1_a,r1_b,r0_a,label,group\n1,2,3,0,m\n"
        with pytest.raises(SchemaError, match="per-round width"):
            read_features(_write(tmp_path, "u.csv", text))

    def test_ragged_row(self, tmp_path):
        text = "r0_a,r0_b,label,group\n1,2,0\n"
        with pytest.raises(SchemaError, match="expected 4 cells"):
            read_features(_write(tmp_path, "r.csv", text))

    def test_non_numeric_cell(self, tmp_path):
        text = "r0_a,label,group\nbanana,0,m\n"
        with pytest.raises(SchemaError):
            read_features(_write(tmp_path, "n.csv", text))

    def test_non_finite_value(self, tmp_path):
        text = "r0_a,label,group\nnan,0,m\n"
        with pytest.raises(SchemaError, match="non-finite"):
            read_features(_write(tmp_path, "f.csv", text))

    def test_jsonl_header_without_columns(self, tmp_path):
        with pytest.raises(SchemaError, match="columns"):
            read_features(_write(tmp_path, "h.jsonl", '{"task":null}\n'))

    def test_jsonl_row_width_mismatch(self, tmp_path):
        text = '{"columns":["r0_a","r0_b"]}\n{"x":[1.0],"y":0,"group":"m"}\n'
        with pytest.raises(SchemaError, match="row width"):
            read_features(_write(tmp_path, "w.jsonl", text))

    def test_jsonl_non_integer_label(self, tmp_path):
        text = '{"columns":["r0_a"]}\n{"x":[1.0],"y":true,"group":"m"}\n'
        with pytest.raises(SchemaError, match="label must be an integer"):
            read_features(_write(tmp_path, "b.jsonl", text))

    def test_jsonl_missing_row_keys(self, tmp_path):
        text = '{"columns":["r0_a"]}\n{"x":[1.0]}\n'
        with pytest.raises(SchemaError, match="'x', 'y', and 'group'"):
            read_features(_write(tmp_path, "k.jsonl", text))

    def test_jsonl_bad_json_row(self, tmp_path):
        text = '{"columns":["r0_a"]}\nnot json\n'
        with pytest.raises(SchemaError, match="bad JSON row"):
            read_features(_write(tmp_path, "j.jsonl", text))

    def test_error_carries_code(self):
        assert SchemaError("x").code == "E_SCHEMA"


class TestEmptyBody:
    def test_csv_with_header_only(self, tmp_path):
        ff = read_features(_write(tmp_path, "only.csv", "r0_a,label,group\n"))
        assert isinstance(ff, FeatureFile)
        assert ff.n_examples == 0
        assert ff.k == 0
