import json

import numpy as np
import pytest

from predfuse import (CombinerWeights, ConstraintError, LabelVector,
                      ProbSeries, TrainConfig, ValidationError, cross_validate,
                      NNMethod, RunPlan)
from predfuse.combiner import TrainResult
from predfuse.io_files import (atomic_write_text, load_label_file, load_matrix,
                               load_prediction_file, load_report,
                               load_weights, save_label_file,
                               save_matrix_files, save_prediction_file,
                               save_report, save_weights)
from predfuse.synth import SyntheticSpec, generate


def write(path, text):
    path.write_text(text, encoding="utf-8")


class TestPredictionFiles:
    def test_round_trip_is_exact(self, tmp_path, rng):
        values = np.concatenate([[0.0, 1.0, 1e-17, 0.1 + 0.2],
                                 rng.uniform(0, 1, size=50)])
        series = ProbSeries(tuple(f"id{i}" for i in range(len(values))), values)
        path = tmp_path / "preds.csv"
        save_prediction_file(path, series)
        back = load_prediction_file(path)
        assert back.ids == series.ids
        np.testing.assert_array_equal(back.values, series.values)

    def test_header_enforced(self, tmp_path):
        path = tmp_path / "bad.csv"
        write(path, "id,probability\nx,0.5\n")
        with pytest.raises(ValidationError, match="header"):
            load_prediction_file(path)

    def test_out_of_range_names_file_and_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        write(path, "id,prob\na,0.5\nb,1.5\n")
        with pytest.raises(ValidationError, match=r"bad\.csv:3.*1\.5"):
            load_prediction_file(path)

    def test_non_numeric_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        write(path, "id,prob\na,zero\n")
        with pytest.raises(ValidationError, match="not a number"):
            load_prediction_file(path)

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        write(path, "id,prob\na,0.5\na,0.6\n")
        with pytest.raises(ValidationError, match="duplicate"):
            load_prediction_file(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        write(path, "")
        with pytest.raises(ValidationError):
            load_prediction_file(path)


class TestLabelFiles:
    def test_round_trip(self, tmp_path):
        labels = LabelVector(("a", "b", "c"), [1, 0, 1])
        path = tmp_path / "labels.csv"
        save_label_file(path, labels)
        back = load_label_file(path)
        assert back.ids == labels.ids
        np.testing.assert_array_equal(back.values, labels.values)

    def test_nonbinary_label_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        write(path, "id,label\na,2\n")
        with pytest.raises(ValidationError, match="0 or 1"):
            load_label_file(path)


class TestLoadMatrix:
    def test_two_files_identical_ids(self, tmp_path):
        write(tmp_path / "m1.csv", "id,prob\na,0.1\nb,0.9\n")
        write(tmp_path / "m2.csv", "id,prob\nb,0.8\na,0.2\n")
        m = load_matrix([tmp_path / "m1.csv", tmp_path / "m2.csv"])
        assert m.model_names == ("m1", "m2")
        assert m.ids == ("a", "b")  # first file's order wins
        np.testing.assert_allclose(m.values, [[0.1, 0.2], [0.9, 0.8]])

    def test_disjoint_ids_rejected_naming_missing_id(self, tmp_path):
        write(tmp_path / "m1.csv", "id,prob\na,0.1\nb,0.9\n")
        write(tmp_path / "m2.csv", "id,prob\na,0.8\nc,0.2\n")
        with pytest.raises(ValidationError, match="'b'|'c'"):
            load_matrix([tmp_path / "m1.csv", tmp_path / "m2.csv"])

    def test_explicit_names(self, tmp_path):
        write(tmp_path / "m1.csv", "id,prob\na,0.1\n")
        m = load_matrix([tmp_path / "m1.csv"], names=["primary"])
        assert m.model_names == ("primary",)

    def test_no_files_rejected(self):
        with pytest.raises(ValidationError):
            load_matrix([])

    def test_generate_save_load_is_identity(self, tmp_path):
        labels, matrix = generate(SyntheticSpec(
            k=3, target_acc=(0.8, 0.85, 0.9), n=200, seed=13))
        save_matrix_files(tmp_path, matrix)
        save_label_file(tmp_path / "labels.csv", labels)
        back = load_matrix([tmp_path / f"{n}.csv" for n in matrix.model_names])
        assert back.ids == matrix.ids
        np.testing.assert_array_equal(back.values, matrix.values)
        back_labels = load_label_file(tmp_path / "labels.csv")
        np.testing.assert_array_equal(back_labels.values, labels.values)


class TestWeightsJson:
    def result(self):
        w = CombinerWeights(("M1", "M2"), np.array([1 / 3, 0.92409282]),
                            b=-0.3127, t=0.5)
        return TrainResult(weights=w, config=TrainConfig(seed=7),
                           clipped_any=True, degenerate_labels=False)

    def test_round_trip_bit_exact(self, tmp_path):
        path = tmp_path / "w.json"
        save_weights(path, self.result())
        back = load_weights(path)
        np.testing.assert_array_equal(back.weights.w, self.result().weights.w)
        assert back.weights.b == self.result().weights.b
        assert back.weights.t == 0.5
        assert back.weights.model_names == ("M1", "M2")
        assert back.config == self.result().config
        assert back.clipped_any is True

    def test_field_order_and_17_digit_reals(self, tmp_path):
        path = tmp_path / "w.json"
        save_weights(path, self.result())
        text = path.read_text(encoding="utf-8")
        keys = list(json.loads(text).keys())
        assert keys == ["model_names", "weights", "b", "t", "train_config",
                        "clipped_any"]
        assert "0.33333333333333331" in text  # 17 significant digits of 1/3

    def test_negative_weight_rejected_at_load(self, tmp_path):
        path = tmp_path / "w.json"
        save_weights(path, self.result())
        doc = json.loads(path.read_text(encoding="utf-8"))
        doc["weights"][0] = -0.1
        write(path, json.dumps(doc))
        with pytest.raises(ConstraintError):
            load_weights(path)

    def test_missing_field_rejected(self, tmp_path):
        path = tmp_path / "w.json"
        save_weights(path, self.result())
        doc = json.loads(path.read_text(encoding="utf-8"))
        del doc["b"]
        write(path, json.dumps(doc))
        with pytest.raises(ValidationError, match="missing field 'b'"):
            load_weights(path)

    def test_malformed_json_rejected(self, tmp_path):
        path = tmp_path / "w.json"
        write(path, "{not json")
        with pytest.raises(ValidationError):
            load_weights(path)


class TestReports:
    def test_save_load_round_trip(self, tmp_path):
        spec = dict(k=2, target_acc=(0.8, 0.9), rho=0.2)
        train_u, train_m = generate(SyntheticSpec(n=60, seed=0, **spec))
        test_u, test_m = generate(SyntheticSpec(n=100, seed=9, **spec))
        report = cross_validate(RunPlan(2, 2, 0), train_m, train_u, test_m,
                                test_u, NNMethod(TrainConfig(epochs=2)))
        path = tmp_path / "report.tsv"
        save_report(path, report)
        back = load_report(path)
        assert back.mean == report.mean and back.stdev == report.stdev


class TestAtomicWrites:
    def test_no_partial_file_on_failure(self, tmp_path):
        target = tmp_path / "missing_dir" / "out.txt"
        with pytest.raises(OSError):
            atomic_write_text(target, "hello")
        assert not target.exists()
        assert list(tmp_path.iterdir()) == []

    def test_no_temp_residue_on_success(self, tmp_path):
        target = tmp_path / "out.txt"
        atomic_write_text(target, "hello")
        assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]
        assert target.read_text(encoding="utf-8") == "hello"
