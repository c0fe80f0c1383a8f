"""Command-line driver: formats, determinism, parallelism, round trips, exit codes."""

import json
import subprocess
import sys

import pytest

from spinfid import NumericsError
from spinfid import cli


def run_cli(argv, tmp_path, name="out"):
    out = tmp_path / f"{name}.txt"
    code = cli.main(argv + ["--output", str(out)])
    return code, out.read_text() if out.exists() else ""


def data_section(text):
    return "\n".join(ln for ln in text.splitlines() if not ln.startswith("#"))


class TestBasics:
    def test_fidelity_single_row(self, tmp_path):
        code, text = run_cli(["fidelity", "--path", "A", "--gamma", "1", "--delta", "1e-3",
                              "--c", "1", "--N", "1000"], tmp_path)
        assert code == 0
        lines = data_section(text).strip().splitlines()
        assert lines[0].startswith("N,lnF,F,")
        fields = lines[1].split(",")
        assert fields[0] == "1000"
        assert 0.0 < float(fields[2]) < 1.0

    def test_scaling_c0_row_reads_quarter(self, tmp_path):
        code, text = run_cli(["scaling", "--function", "A", "--c-range", "-3:3:601"], tmp_path)
        assert code == 0
        rows = dict()
        for ln in data_section(text).strip().splitlines()[1:]:
            c, v = ln.split(",")
            rows[c] = v
        assert rows["0"] == "0.25"

    def test_csv_floats_roundtrip_17_digits(self, tmp_path):
        code, text = run_cli(["scaling", "--function", "B", "--c-range", "0:2:5"], tmp_path)
        assert code == 0
        from spinfid import scaling_B
        for ln in data_section(text).strip().splitlines()[1:]:
            c, v = ln.split(",")
            assert float(v) == scaling_B(float(c))

    def test_sweep_emits_prediction(self, tmp_path):
        code, text = run_cli(["sweep", "--path", "B", "--g", "0.99", "--delta", "0.002",
                              "--c", "0.5", "--N-range", "2000:2006:2", "--format", "json"],
                             tmp_path)
        assert code == 0
        doc = json.loads(text)
        assert set(doc) == {"config", "manifest", "rows"}
        assert len(doc["rows"]) == 4
        assert {"N", "lnF", "F", "pred_lnF_per_site"} <= set(doc["rows"][0])

    def test_crossover_slope_curve(self, tmp_path):
        code, text = run_cli(["crossover", "--scan", "delta", "--alpha", "1", "--c", "1",
                              "--N", "2000", "--range", "1e-9:1e-4", "--per-decade", "8"],
                             tmp_path)
        assert code == 0
        manifest = json.loads(text.splitlines()[0].split("# manifest: ")[1])
        assert manifest["result"]["crossing"] == pytest.approx(0.465 / 2000 ** 2, rel=0.3)

    def test_crossover_fit_mode(self, tmp_path):
        code, text = run_cli(["crossover", "--scan", "delta", "--alpha", "1", "--c", "1",
                              "--sweep-list", "1000,2000,4000", "--range", "1e-9:1e-4",
                              "--per-decade", "8"], tmp_path)
        assert code == 0
        manifest = json.loads(text.splitlines()[0].split("# manifest: ")[1])
        assert manifest["result"]["fit"]["slope"] == pytest.approx(-2.0, abs=0.1)

    def test_quench_rows(self, tmp_path):
        code, text = run_cli(["quench", "--gamma", "1", "--delta", "1e-3", "--N", "2000",
                              "--c-range", "0:1:3"], tmp_path)
        assert code == 0
        header = data_section(text).strip().splitlines()[0]
        assert header == "c,n_ex,n_ex_integral,nex_over_delta,B_c,survival"

    def test_verify_rows(self, tmp_path):
        code, text = run_cli(["verify", "--which", "pathA", "--gamma", "1", "--delta", "1e-3",
                              "--c-range", "0:1:2"], tmp_path)
        assert code == 0
        rows = data_section(text).strip().splitlines()
        assert rows[0] == "gamma,delta,c,E,normalized"
        assert abs(float(rows[1].split(",")[4])) < 0.25


class TestDeterminism:
    def test_identical_configs_identical_data(self, tmp_path):
        argv = ["sweep", "--path", "A", "--gamma", "1", "--delta", "1e-3", "--c", "0.5",
                "--N-range", "1000:1200:50"]
        _, a = run_cli(argv, tmp_path, "a")
        _, b = run_cli(argv, tmp_path, "b")
        assert data_section(a) == data_section(b)
        ma = json.loads(a.splitlines()[0].split("# manifest: ")[1])
        mb = json.loads(b.splitlines()[0].split("# manifest: ")[1])
        for volatile in ("created_utc", "wall_time_s"):
            ma.pop(volatile), mb.pop(volatile)
        assert ma == mb

    def test_parallelism_transparency(self, tmp_path):
        base = ["quench", "--gamma", "1", "--delta", "1e-3", "--N", "2000",
                "--c-range", "-1:1:9"]
        _, a = run_cli(base + ["--parallelism", "1"], tmp_path, "p1")
        _, b = run_cli(base + ["--parallelism", "8"], tmp_path, "p8")
        assert data_section(a) == data_section(b)

    def test_json_config_round_trip(self, tmp_path):
        argv = ["verify", "--which", "pathB", "--g", "0.5", "--delta", "1e-3",
                "--c-range", "0:2:5", "--format", "json"]
        _, first = run_cli(argv, tmp_path, "first")
        doc = json.loads(first)
        cfg_file = tmp_path / "replay.json"
        cfg_file.write_text(json.dumps(doc["config"]))
        code = cli.main(["verify", "--config", str(cfg_file),
                         "--output", str(tmp_path / "second.txt")])
        assert code == 0
        second = json.loads((tmp_path / "second.txt").read_text())
        assert second["rows"] == doc["rows"]
        assert second["config"] == doc["config"]


class TestExitCodes:
    def test_invalid_config_is_2(self, tmp_path):
        assert cli.main(["fidelity", "--path", "A", "--gamma", "1",
                         "--delta", "1e-3", "--c", "1"]) == 2  # missing --N
        assert cli.main(["fidelity", "--path", "A", "--gamma", "1", "--delta", "1e-3",
                         "--c", "1", "--N", "7"]) == 2  # odd N
        assert cli.main(["scaling", "--function", "A", "--c-range", "oops"]) == 2
        assert cli.main(["nonsense"]) == 2

    def test_numeric_failure_is_3(self, monkeypatch):
        def boom(args):
            raise NumericsError("synthetic")
        monkeypatch.setattr(cli, "_verify_row", boom)
        code = cli.main(["verify", "--which", "pathA", "--gamma", "1", "--delta", "1e-3",
                         "--c-range", "0:1:2"])
        assert code == 3

    def test_io_failure_is_4(self):
        code = cli.main(["scaling", "--function", "A", "--c-range", "0:1:3",
                         "--output", "/nonexistent_dir_xyz/out.csv"])
        assert code == 4

    def test_console_entry_point(self, tmp_path):
        proc = subprocess.run([sys.executable, "-m", "spinfid.cli", "scaling",
                               "--function", "A_mps", "--c-range", "0:2:5"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert "c,value" in proc.stdout
