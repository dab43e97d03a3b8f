"""End-to-end tests through the Typer CLI."""

import csv

import numpy as np
import pytest
from typer.testing import CliRunner

from conftest import FAST_FLAGS
from rbmvec.main import app
from rbmvec.rbm import Supervector, save_supervectors

runner = CliRunner()

STAGE_FILES = [
    "mvn.yaml",
    "train.norm.csv",
    "test.norm.csv",
    "urbm.rbmc",
    "urbm.rbmc.yaml",
    "supervectors.rbsv",
    "clusters.csv",
    "merges.csv",
    "report.csv",
]


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


class TestSynth:
    """Test the synth command."""

    def test_writes_features_and_labels(self, tmp_path):
        """classes=2, items=1, frames=1, dim=2: two feature rows, two label rows."""
        out = tmp_path / "syn"
        result = runner.invoke(app, [
            "synth", "-o", str(out), "--classes", "2", "--items-per-class", "1",
            "--frames-per-item", "1", "--dim", "2",
        ])
        assert result.exit_code == 0, result.output
        assert len((out / "features.csv").read_text().splitlines()) == 3
        assert len((out / "labels.csv").read_text().splitlines()) == 3

    def test_byte_identical_for_same_seed(self, tmp_path):
        """Fixed seed, identical files."""
        for name in ("a", "b"):
            runner.invoke(app, ["synth", "-o", str(tmp_path / name), "--seed", "5", "--classes", "3"])
        assert (tmp_path / "a" / "features.csv").read_bytes() == (tmp_path / "b" / "features.csv").read_bytes()

    def test_binary_format_and_training_population(self, tmp_path):
        """Binary output plus a disjoint training set."""
        out = tmp_path / "syn"
        result = runner.invoke(app, ["synth", "-o", str(out), "--format", "binary", "--train-classes", "2"])
        assert result.exit_code == 0, result.output
        assert (out / "features.rbfv").read_bytes()[:4] == b"RBFV"
        assert (out / "train.rbfv").exists()
        assert (out / "train_labels.csv").exists()


class TestPipeline:
    """Test the full pipeline."""

    def test_desk_scale_run(self, tmp_path):
        """10 classes x 20 items: the best swept threshold clusters almost perfectly."""
        data, out = tmp_path / "data", tmp_path / "run"
        runner.invoke(app, [
            "synth", "-o", str(data), "--classes", "10", "--items-per-class", "20",
            "--frames-per-item", "5", "--dim", "16", "--separation", "4",
        ])
        sweep = ",".join(f"{k / 20:.2f}" for k in range(1, 20))
        result = runner.invoke(app, [
            "pipeline", "--test", str(data / "features.csv"), "--labels", str(data / "labels.csv"),
            "-o", str(out), "--hidden", "32", "--linkage", "average", "--sweep", sweep, "--baseline",
        ])
        assert result.exit_code == 0, result.output

        rows = read_rows(out / "sweep.csv")
        assert len(rows) == 19
        for row in rows:
            assert 0.0 <= float(row["Fp"]) <= 1.0
            assert 0.0 <= float(row["Fb"]) <= 1.0
        assert max(float(r["Fp"]) for r in rows) >= 0.9
        assert max(float(r["Fb"]) for r in rows) >= 0.9

        comparison = read_rows(out / "comparison.csv")
        assert [r["method"] for r in comparison] == ["ahc-rbm", "kmeans"]
        assert list(comparison[0]) == ["method", "n_clusters", "Fp", "Fb", "seconds"]
        assert (out / "kmeans" / "report.csv").exists()
        assert (out / "urbm_training_log.csv").exists()

    def test_artifacts_for_single_stop_rule(self, tmp_path, small_synth):
        """A known-K run writes every stage's file."""
        out = tmp_path / "run"
        result = runner.invoke(app, [
            "pipeline", "--test", str(small_synth["features"]), "--labels", str(small_synth["labels"]),
            "-o", str(out), "--num-clusters", "4", *FAST_FLAGS,
        ])
        assert result.exit_code == 0, result.output
        for name in STAGE_FILES:
            assert (out / name).exists(), name
        assert len(read_rows(out / "clusters.csv")) == 20
        assert len({r["cluster_index"] for r in read_rows(out / "clusters.csv")}) == 4

    def test_deterministic(self, tmp_path, small_synth):
        """Two runs, identical supervectors and clusters."""
        for name in ("a", "b"):
            result = runner.invoke(app, [
                "pipeline", "--test", str(small_synth["features"]), "-o", str(tmp_path / name),
                "--threshold", "0.5", "--seed", "7", *FAST_FLAGS,
            ])
            assert result.exit_code == 0, result.output
        for name in ("supervectors.rbsv", "clusters.csv", "merges.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_seed_changes_supervectors(self, tmp_path, small_synth):
        """Different seeds give different supervectors."""
        for name, seed in (("a", "1"), ("b", "2")):
            runner.invoke(app, [
                "pipeline", "--test", str(small_synth["features"]), "-o", str(tmp_path / name),
                "--num-clusters", "2", "--seed", seed, *FAST_FLAGS,
            ])
        assert (tmp_path / "a" / "supervectors.rbsv").read_bytes() != (tmp_path / "b" / "supervectors.rbsv").read_bytes()

    def test_staged_equals_pipeline(self, tmp_path, small_synth):
        """Running the stages by hand writes the same bytes as the pipeline."""
        features, labels = str(small_synth["features"]), str(small_synth["labels"])
        piped, staged = tmp_path / "piped", tmp_path / "staged"
        result = runner.invoke(app, [
            "pipeline", "--test", features, "--labels", labels, "-o", str(piped), "--num-clusters", "4", *FAST_FLAGS,
        ])
        assert result.exit_code == 0, result.output

        steps = [
            ["normalize", "--test", features, "-o", str(staged)],
            ["train-urbm", "--train", str(staged / "train.norm.csv"), "-o", str(staged), "--hidden", "8", "--epochs", "10"],
            ["adapt-extract", "--test", str(staged / "test.norm.csv"), "--urbm", str(staged / "urbm.rbmc"),
             "-o", str(staged), "--epochs", "10"],
            ["cluster", "-s", str(staged / "supervectors.rbsv"), "-o", str(staged), "--num-clusters", "4"],
            ["evaluate", "--clusters", str(staged / "clusters.csv"), "--labels", labels, "-o", str(staged)],
        ]
        for step in steps:
            result = runner.invoke(app, step)
            assert result.exit_code == 0, result.output

        for name in STAGE_FILES:
            assert (piped / name).read_bytes() == (staged / name).read_bytes(), name

    def test_sweep_writes_theta_directories(self, tmp_path, small_synth):
        """One subdirectory per θ plus the sweep summary."""
        out = tmp_path / "run"
        result = runner.invoke(app, [
            "pipeline", "--test", str(small_synth["features"]), "--labels", str(small_synth["labels"]),
            "-o", str(out), "--sweep", "0.2,0.6", *FAST_FLAGS,
        ])
        assert result.exit_code == 0, result.output
        for theta in ("0.2", "0.6"):
            assert (out / f"theta_{theta}" / "clusters.csv").exists()
            assert (out / f"theta_{theta}" / "report.csv").exists()
        assert [r["theta"] for r in read_rows(out / "sweep.csv")] == ["0.2", "0.6"]

    def test_config_file(self, tmp_path, small_synth):
        """Values come from the config file; CLI flags override them."""
        config = tmp_path / "run.yaml"
        config.write_text(
            f"test_features: {small_synth['features']}\n"
            f"output_dir: {tmp_path / 'run'}\n"
            "num_clusters: 3\n"
            "hidden_units: 8\n"
            "urbm_epochs: 5\n"
            "adapt_epochs: 5\n"
        )
        result = runner.invoke(app, ["pipeline", "--config", str(config), "--num-clusters", "2"])
        assert result.exit_code == 0, result.output
        assert len({r["cluster_index"] for r in read_rows(tmp_path / "run" / "clusters.csv")}) == 2

    def test_assignment_config_file(self, tmp_path, small_synth):
        """A key = value file drives the run; a CLI stop flag replaces its threshold."""
        config = tmp_path / "run.cfg"
        config.write_text(
            f"test_features = {small_synth['features']}\n"
            f"output_dir = {tmp_path / 'run'}\n"
            "threshold = 0.5\n"
            "hidden_units = 8\n"
            "urbm_epochs = 5\n"
            "adapt_epochs = 5\n"
        )
        result = runner.invoke(app, ["pipeline", "--config", str(config), "--num-clusters", "2"])
        assert result.exit_code == 0, result.output
        assert len({r["cluster_index"] for r in read_rows(tmp_path / "run" / "clusters.csv")}) == 2

    def test_cluster_stop_flag_overrides_file(self, tmp_path):
        """cluster: a file sweep gives way to --num-clusters."""
        vectors = [Supervector(np.array(v, dtype=float), name) for name, v in
                   (("a", [1.0, 0.0]), ("b", [0.9, 0.1]), ("c", [0.0, 1.0]))]
        save_supervectors(vectors, tmp_path / "sv.rbsv")
        config = tmp_path / "cluster.cfg"
        config.write_text("sweep = 0.2,0.4\nlinkage = single\n")
        result = runner.invoke(app, [
            "cluster", "-s", str(tmp_path / "sv.rbsv"), "-o", str(tmp_path / "out"),
            "--config", str(config), "--num-clusters", "2",
        ])
        assert result.exit_code == 0, result.output
        rows = {r["item_id"]: r["cluster_index"] for r in read_rows(tmp_path / "out" / "clusters.csv")}
        assert rows["a"] == rows["b"] != rows["c"]

    def test_run_config_replays(self, tmp_path, small_synth):
        """The saved run_config.yaml reproduces the run."""
        first, second = tmp_path / "first", tmp_path / "second"
        result = runner.invoke(app, [
            "pipeline", "--test", str(small_synth["features"]), "-o", str(first),
            "--threshold", "0.4", "--seed", "5", *FAST_FLAGS,
        ])
        assert result.exit_code == 0, result.output
        assert (first / "run_config.yaml").exists()

        result = runner.invoke(app, ["pipeline", "--config", str(first / "run_config.yaml"), "-o", str(second)])
        assert result.exit_code == 0, result.output
        for name in ("supervectors.rbsv", "clusters.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes(), name

    def test_unknown_config_key(self, tmp_path, small_synth):
        """Typos in the config file are a usage error."""
        config = tmp_path / "run.yaml"
        config.write_text("num_clustres: 3\n")
        result = runner.invoke(app, ["pipeline", "--config", str(config), "--test", str(small_synth["features"])])
        assert result.exit_code == 2
        assert "num_clustres" in result.output

    def test_two_stop_rules(self, tmp_path, small_synth):
        """Exactly one stop rule."""
        result = runner.invoke(app, [
            "pipeline", "--test", str(small_synth["features"]), "-o", str(tmp_path / "run"),
            "--threshold", "0.5", "--num-clusters", "3",
        ])
        assert result.exit_code == 2

    def test_missing_labels_file(self, tmp_path, small_synth):
        """--evaluate with a missing labels file names the path."""
        missing = tmp_path / "nope" / "labels.csv"
        result = runner.invoke(app, [
            "pipeline", "--test", str(small_synth["features"]), "--labels", str(missing), "--evaluate",
            "-o", str(tmp_path / "run"), "--num-clusters", "2", *FAST_FLAGS,
        ])
        assert result.exit_code == 3
        assert str(missing) in result.output

    def test_evaluate_without_labels(self, tmp_path, small_synth):
        """--evaluate needs --labels."""
        result = runner.invoke(app, [
            "pipeline", "--test", str(small_synth["features"]), "--evaluate",
            "-o", str(tmp_path / "run"), "--num-clusters", "2",
        ])
        assert result.exit_code == 2


class TestStages:
    """Test stage commands on their own."""

    def test_adapt_threads_byte_identical(self, tmp_path, small_synth):
        """--threads 1 and --threads 8 write the same supervectors."""
        out = tmp_path / "run"
        runner.invoke(app, ["normalize", "--test", str(small_synth["features"]), "-o", str(out)])
        runner.invoke(app, ["train-urbm", "--train", str(out / "train.norm.csv"), "-o", str(out), "--hidden", "8", "--epochs", "5"])
        for threads in ("1", "8"):
            result = runner.invoke(app, [
                "adapt-extract", "--test", str(out / "test.norm.csv"), "--urbm", str(out / "urbm.rbmc"),
                "-o", str(out / f"t{threads}"), "--epochs", "10", "--threads", threads,
            ])
            assert result.exit_code == 0, result.output
        assert (out / "t1" / "supervectors.rbsv").read_bytes() == (out / "t8" / "supervectors.rbsv").read_bytes()

    def test_cluster_huge_threshold(self, tmp_path):
        """Three supervectors, θ far above any cosine: three singletons."""
        vectors = [
            Supervector(np.array([1.0, 0.0, 0.0]), "a"),
            Supervector(np.array([0.9, 0.1, 0.0]), "b"),
            Supervector(np.array([0.0, 0.0, 1.0]), "c"),
        ]
        save_supervectors(vectors, tmp_path / "sv.rbsv")
        result = runner.invoke(app, ["cluster", "-s", str(tmp_path / "sv.rbsv"), "--threshold", "10", "-o", str(tmp_path)])
        assert result.exit_code == 0, result.output
        rows = read_rows(tmp_path / "clusters.csv")
        assert [(r["item_id"], r["cluster_index"]) for r in rows] == [("a", "0"), ("b", "1"), ("c", "2")]

    def test_cluster_zero_vector_is_numeric_error(self, tmp_path):
        """An all-zero supervector exits with the numeric code."""
        vectors = [Supervector(np.ones(2), "a"), Supervector(np.zeros(2), "b")]
        save_supervectors(vectors, tmp_path / "sv.rbsv")
        result = runner.invoke(app, ["cluster", "-s", str(tmp_path / "sv.rbsv"), "--num-clusters", "1", "-o", str(tmp_path)])
        assert result.exit_code == 4
        assert "[clustering]" in result.output

    def test_evaluate_perfect(self, tmp_path):
        """Prediction equal to truth: Fp = Fb = 1."""
        (tmp_path / "clusters.csv").write_text("item_id,cluster_index\na,0\nb,0\nc,1\n")
        (tmp_path / "labels.csv").write_text("item_id,class_id\na,x\nb,x\nc,y\n")
        result = runner.invoke(app, [
            "evaluate", "--clusters", str(tmp_path / "clusters.csv"),
            "--labels", str(tmp_path / "labels.csv"), "-o", str(tmp_path),
        ])
        assert result.exit_code == 0, result.output
        report = read_rows(tmp_path / "report.csv")[0]
        assert report["Fp"] == "1.0"
        assert report["Fb"] == "1.0"

    def test_evaluate_item_mismatch(self, tmp_path):
        """Items missing from the labels are a data error."""
        (tmp_path / "clusters.csv").write_text("item_id,cluster_index\na,0\nz,0\n")
        (tmp_path / "labels.csv").write_text("item_id,class_id\na,x\n")
        result = runner.invoke(app, [
            "evaluate", "--clusters", str(tmp_path / "clusters.csv"),
            "--labels", str(tmp_path / "labels.csv"), "-o", str(tmp_path),
        ])
        assert result.exit_code == 3

    def test_missing_input_file(self, tmp_path):
        """Missing inputs exit with the data code and name the file."""
        missing = tmp_path / "absent.csv"
        result = runner.invoke(app, ["normalize", "--test", str(missing), "-o", str(tmp_path)])
        assert result.exit_code == 3
        assert str(missing) in result.output

    def test_bad_sweep_text(self, tmp_path):
        """--sweep takes numbers."""
        result = runner.invoke(app, ["cluster", "-s", str(tmp_path / "sv.rbsv"), "--sweep", "a,b"])
        assert result.exit_code == 2

    @pytest.mark.parametrize("flag", ["-v", "-vv"])
    def test_verbose_flag(self, tmp_path, flag):
        """Verbosity is a global option."""
        result = runner.invoke(app, [flag, "synth", "-o", str(tmp_path), "--classes", "2"])
        assert result.exit_code == 0, result.output
