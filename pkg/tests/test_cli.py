"""Command line interface: exit codes, overrides, and table output."""

import numpy as np

from quantlink.cli import THREADS_ENV_VAR, main

VALID_CONFIG = """
experiment = rate_vs_snr
snr_grid_db = 0
bits_grid = 1
n_rf_rx = 2
n_realizations = 1
methods = ci_exact
master_seed = 5
"""


def write_config(tmp_path, text=VALID_CONFIG):
    path = tmp_path / "exp.cfg"
    path.write_text(text)
    return path


class TestValidate:
    def test_valid_config_exits_zero(self, tmp_path, capsys):
        path = write_config(tmp_path)
        assert main(["validate", "--config", str(path)]) == 0
        assert "config OK" in capsys.readouterr().out

    def test_bad_config_exits_one(self, tmp_path, capsys):
        path = write_config(tmp_path, "n_realizations = 0\n")
        assert main(["validate", "--config", str(path)]) == 1
        assert "config error" in capsys.readouterr().err

    def test_missing_file_exits_one(self, tmp_path, capsys):
        assert main(["validate", "--config", str(tmp_path / "nope.cfg")]) == 1
        assert "config error" in capsys.readouterr().err


class TestRun:
    def test_writes_csv_and_applies_overrides(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        out = tmp_path / "out.csv"
        code = main(["run", "--config", str(cfg), "--out", str(out), "--seed", "99"])
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 2
        assert lines[1].endswith(",99")  # master_seed override lands in the record

    def test_thread_env_var_honored_and_flag_wins(self, tmp_path, monkeypatch):
        cfg = write_config(tmp_path)
        out_env = tmp_path / "env.csv"
        out_flag = tmp_path / "flag.csv"
        monkeypatch.setenv(THREADS_ENV_VAR, "2")
        assert main(["run", "--config", str(cfg), "--out", str(out_env)]) == 0
        assert main(["run", "--config", str(cfg), "--out", str(out_flag), "--threads", "1"]) == 0
        assert out_env.read_bytes() == out_flag.read_bytes()

    def test_bad_env_var_is_config_error(self, tmp_path, monkeypatch, capsys):
        cfg = write_config(tmp_path)
        monkeypatch.setenv(THREADS_ENV_VAR, "many")
        assert main(["run", "--config", str(cfg)]) == 1

    def test_unwritable_output_is_runtime_error(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        out = tmp_path / "no" / "such" / "dir" / "out.csv"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 2
        assert "runtime error" in capsys.readouterr().err


class TestTables:
    def test_quantizer_table(self, capsys):
        assert main(["tables", "--quantizers"]) == 0
        out = capsys.readouterr().out
        lines = out.strip().splitlines()
        assert len(lines) == 9  # header + 8 resolutions
        first = lines[1].split()
        assert first[0] == "1"
        assert abs(float(first[1]) - (1.0 - 2.0 / np.pi)) < 1e-10
        # 2^b levels per row
        assert len(lines[8].split()) == 3 + 256

    def test_missing_flag_exits_one(self, capsys):
        assert main(["tables"]) == 1
