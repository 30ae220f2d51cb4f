import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

from qadv.cli import main
from qadv.harness import save_pair, shipped_pair_specs


@pytest.fixture
def pair_files(tmp_path):
    paths = {}
    for name, (a, b) in shipped_pair_specs().items():
        path = tmp_path / f"{name}.json"
        save_pair(a, b, str(path))
        paths[name] = str(path)
    return paths


@pytest.fixture
def state_files(tmp_path):
    rho = tmp_path / "rho.json"
    sigma = tmp_path / "sigma.json"
    rho.write_text(json.dumps({"matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}))
    sigma.write_text(json.dumps({"matrix": [[[0.9, 0], [0, 0]], [[0, 0], [0.1, 0]]]}))
    return str(rho), str(sigma)


class TestDivergenceCommand:
    def test_informed(self, pair_files):
        result = CliRunner().invoke(main, ["divergence", "--pair", pair_files["example1"], "--kind", "informed"])
        assert result.exit_code == 0
        assert "0.532" in result.output

    def test_inf(self, pair_files):
        result = CliRunner().invoke(main, ["divergence", "--pair", pair_files["example1"], "--kind", "inf"])
        assert result.exit_code == 0
        assert "value: 0 nats" in result.output

    def test_cq_informed_bits(self, pair_files):
        result = CliRunner().invoke(
            main,
            ["divergence", "--pair", pair_files["example1-cq"], "--kind", "cq-informed", "--bits"],
        )
        assert result.exit_code == 0
        assert "value: 1 bits" in result.output
        assert "argmin symbol: 0" in result.output

    def test_cq_pair(self, pair_files):
        result = CliRunner().invoke(
            main, ["divergence", "--pair", pair_files["example1-cq"], "--kind", "cq-pair"]
        )
        assert result.exit_code == 0

    def test_eb_pair_loads(self, pair_files):
        result = CliRunner().invoke(
            main, ["divergence", "--pair", pair_files["classical-eb"], "--kind", "inf"]
        )
        assert result.exit_code == 0

    def test_kind_mismatch_fails(self, pair_files):
        result = CliRunner().invoke(
            main, ["divergence", "--pair", pair_files["example1"], "--kind", "cq-pair"]
        )
        assert result.exit_code != 0


class TestBetaCommand:
    def test_two_outcome_value(self, state_files):
        rho, sigma = state_files
        result = CliRunner().invoke(main, ["beta", "--rho", rho, "--sigma", sigma, "--eps", "0.4"])
        assert result.exit_code == 0
        assert "beta: 0.28" in result.output


class TestSteinCommand:
    def test_writes_csv(self, pair_files, tmp_path):
        out = tmp_path / "rows.csv"
        result = CliRunner().invoke(
            main,
            [
                "stein",
                "--pair",
                pair_files["example1"],
                "--setting",
                "informed",
                "--inputs",
                "iid",
                "--eps",
                "0.3",
                "--n",
                "1,2",
                "--out",
                str(out),
            ],
        )
        assert result.exit_code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0].startswith("n,epsilon")
        assert len(lines) == 3


class TestVerifyCommand:
    def test_example1_passes(self):
        result = CliRunner().invoke(main, ["verify", "example1"])
        assert result.exit_code == 0
        assert "FAIL" not in result.output


class TestExitCodes:
    def test_missing_file_is_usage_error(self):
        proc = subprocess.run(
            [sys.executable, "-m", "qadv.cli", "beta", "--rho", "/nonexistent.json", "--sigma", "/nonexistent.json"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2

    def test_validation_error_maps_to_two(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "qadv.cli",
                "divergence",
                "--pair",
                str(bad),
                "--kind",
                "informed",
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2
        assert "error" in proc.stderr.lower()

    def test_cap_exceeded_maps_to_three(self, tmp_path):
        # non-commuting outputs force the explicit-operator path, which
        # refuses 2^20-dimensional states
        import numpy as np

        from qadv.harness import spec_from_channel
        from qadv.qobjects import channel_from_kraus

        theta = 0.3
        rot = np.array(
            [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
        )
        n1 = channel_from_kraus([np.eye(2) * np.sqrt(0.5), rot * np.sqrt(0.5)])
        n2 = channel_from_kraus([np.eye(2)])
        path = tmp_path / "pair.json"
        save_pair(spec_from_channel(n1), spec_from_channel(n2), str(path))
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "qadv.cli",
                "stein",
                "--pair",
                str(path),
                "--setting",
                "informed",
                "--inputs",
                "iid",
                "--n",
                "20",
                "--out",
                str(tmp_path / "rows.csv"),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 3
