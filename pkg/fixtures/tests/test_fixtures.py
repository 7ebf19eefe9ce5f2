"""Fixture-quality checks.

The primary analysis package is exercised only through its public surfaces:
the network JSON files this package writes and the `tads` command-line tool.
"""

import json
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from xor_fixtures import FixtureSpec, TrainingFailure, corner_errors, train_xor
from xor_fixtures.cli import main as fixtures_main
from xor_fixtures.emit import baseline_network, mlp_layers, network_json
from xor_fixtures.train import CORNERS, TARGETS, forward

REPO = Path(__file__).resolve().parents[2]
COMMITTED = {
    "a": REPO / "tests" / "fixtures" / "xor_trained_a.json",
    "b": REPO / "tests" / "fixtures" / "xor_trained_b.json",
}
COMMITTED_SEEDS = {"a": 8, "b": 10}


def tads_cli(*argv):
    cmd = [shutil.which("tads") or sys.executable, *([] if shutil.which("tads") else ["-m", "tads.cli"])]
    return subprocess.run([*cmd, *argv], capture_output=True, text=True)


def train_json(seed: int, name: str) -> str:
    params, _ = train_xor(FixtureSpec(seed=seed))
    return network_json(name, 2, mlp_layers(params))


class TestBaseline:
    def test_values_via_cli(self, tmp_path):
        path = tmp_path / "n_star.json"
        path.write_text(baseline_network())
        for point, want in [("1,0", "1"), ("0,0", "0"), ("0.3,0.8", "0.5")]:
            res = tads_cli("eval", str(path), "--input", point)
            assert res.returncode == 0, res.stderr
            assert res.stdout.strip() == want

    def test_emission_is_deterministic(self):
        assert baseline_network() == baseline_network()


class TestCornerBar:
    @pytest.mark.parametrize("seed", sorted(COMMITTED_SEEDS.values()))
    def test_trained_network_hits_corners(self, seed):
        params, _ = train_xor(FixtureSpec(seed=seed))
        errs = corner_errors(lambda X: forward(params, X))
        assert errs.max() < 0.1

    def test_committed_fixtures_hit_corners_via_cli(self):
        for path in COMMITTED.values():
            for corner, target in zip(CORNERS, TARGETS.ravel()):
                res = tads_cli(
                    "eval", str(path), "--input", f"{corner[0]},{corner[1]}"
                )
                assert res.returncode == 0, res.stderr
                assert abs(float(res.stdout.strip()) - target) < 0.1


class TestDeterminism:
    def test_same_seed_rerun_is_byte_identical(self):
        assert train_json(8, "x") == train_json(8, "x")

    def test_committed_files_regenerate_exactly(self):
        for key, path in COMMITTED.items():
            regenerated = train_json(COMMITTED_SEEDS[key], f"xor_trained_{key}")
            assert regenerated == path.read_text()


class TestFormatConformance:
    def test_round_trip_through_the_analysis_tool(self, tmp_path):
        path = tmp_path / "net.json"
        path.write_text(train_json(3, "roundtrip"))
        out = tmp_path / "net.tads.json"
        res = tads_cli("convert", str(path), "-o", str(out))
        assert res.returncode == 0, res.stderr
        res = tads_cli("eval", str(out), "--input", "0.5,0.5")
        assert res.returncode == 0

    def test_emitted_document_shape(self):
        doc = json.loads(train_json(3, "shape"))
        assert doc["input_dim"] == 2
        kinds = [layer["type"] for layer in doc["layers"]]
        assert kinds == ["affine", "relu", "affine", "relu", "affine"]


class TestPairwiseDistinctness:
    def test_committed_pair_not_equivalent_at_1e6(self):
        res = tads_cli(
            "equiv", str(COMMITTED["a"]), str(COMMITTED["b"]), "--atol", "1e-6"
        )
        assert res.returncode == 1, res.stdout + res.stderr
        assert "not equivalent" in res.stdout

    def test_fresh_seeds_differ(self, tmp_path):
        pa, pb = tmp_path / "a.json", tmp_path / "b.json"
        pa.write_text(train_json(4, "a"))
        pb.write_text(train_json(6, "b"))
        res = tads_cli("equiv", str(pa), str(pb), "--atol", "1e-6")
        assert res.returncode == 1


class TestFailurePath:
    def test_unreachable_bar_reports_seeds(self):
        spec = FixtureSpec(seed=5, epochs=1, retries=2)
        with pytest.raises(TrainingFailure) as exc:
            train_xor(spec)
        assert len(exc.value.seeds) == 3
        assert all(str(s) in str(exc.value) for s in exc.value.seeds)

    def test_cli_exit_code_on_failure(self, capsys):
        code = fixtures_main(["train", "--seed", "5", "--epochs", "1"])
        assert code == 1
        assert "seeds tried" in capsys.readouterr().err


class TestConfig:
    def test_config_file_settings(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seed": 2, "epochs": 4000, "widths": [2, 8, 8, 1]}))
        out = tmp_path / "net.json"
        code = fixtures_main(["train", "--config", str(cfg), "-o", str(out)])
        assert code == 0
        assert out.read_text() == train_json(2, "xor_trained_seed2")

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seed": 2, "optimizer": "sgd"}))
        code = fixtures_main(["train", "--config", str(cfg)])
        assert code == 2
        assert "bad settings" in capsys.readouterr().err

    def test_bad_widths_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seed": 2, "widths": [3, 8, 1]}))
        code = fixtures_main(["train", "--config", str(cfg)])
        assert code == 2
