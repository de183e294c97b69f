import csv
import json
import math

import pytest

from fracdisk.cli import main
from fracdisk.kernels import dk_value


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestDk:
    def test_csv_to_file(self, tmp_path, capsys, stable_05):
        out = tmp_path / "dk.csv"
        code, _, _ = run(capsys, "dk", "--alpha", "0.5", "--k-max", "2",
                         "--times", "0.5,1.0", "--out", str(out))
        assert code == 0
        rows = list(csv.reader(out.open(newline="")))
        assert rows[0] == ["k", "t", "value"]
        assert len(rows) == 1 + 3 * 2
        k, t, val = int(rows[3][0]), float(rows[3][1]), float(rows[3][2])
        assert (k, t) == (1, 0.5)
        assert val == pytest.approx(dk_value(stable_05, 1.0, 0.5), rel=1e-15)

    def test_sidecar_meta(self, tmp_path, capsys):
        out = tmp_path / "dk.csv"
        code, _, _ = run(capsys, "dk", "--alpha", "0.5", "--k-max", "1",
                         "--times", "1.0", "--out", str(out))
        assert code == 0
        meta = json.loads((tmp_path / "dk.csv.meta.json").read_text())
        assert meta["alpha"] == 0.5
        assert meta["k_max"] == 1
        assert meta["method"] == "auto"
        assert meta["mu"] == 0.0
        assert meta["command"] == "dk"

    def test_stdout_with_meta_on_stderr(self, capsys):
        code, out, err = run(capsys, "dk", "--alpha", "0.5", "--k-max", "0",
                             "--times", "1.0")
        assert code == 0
        assert out.splitlines()[0] == "k,t,value"
        assert json.loads(err)["alpha"] == 0.5

    def test_missing_required(self, capsys):
        code, _, err = run(capsys, "dk", "--alpha", "0.5")
        assert code == 2
        assert "fracdisk: error" in err

    def test_domain_error_maps_to_two(self, capsys):
        code, _, err = run(capsys, "dk", "--alpha", "1.5", "--k-max", "1",
                           "--times", "1.0")
        assert code == 2
        assert "fracdisk: error" in err

    def test_bad_float_list(self, capsys):
        code, _, err = run(capsys, "dk", "--alpha", "0.5", "--k-max", "1",
                           "--times", "a,b")
        assert code == 2
        assert "float list" in err


class TestConfig:
    def test_config_supplies_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(
            {"alpha": 0.5, "k_max": 1, "times": "1.0"}))
        out = tmp_path / "dk.csv"
        code, _, _ = run(capsys, "dk", "--config", str(cfg), "--out", str(out))
        assert code == 0
        rows = out.read_text().splitlines()
        assert len(rows) == 1 + 2

    def test_flags_override_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(
            {"alpha": 0.5, "k_max": 3, "times": "1.0"}))
        out = tmp_path / "dk.csv"
        code, _, _ = run(capsys, "dk", "--config", str(cfg), "--k-max", "1",
                         "--out", str(out))
        assert code == 0
        meta = json.loads((tmp_path / "dk.csv.meta.json").read_text())
        assert meta["k_max"] == 1

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"alpha": 0.5, "kmax": 2}))
        code, _, err = run(capsys, "dk", "--config", str(cfg))
        assert code == 2
        assert "unknown config keys: kmax" in err

    def test_non_object_config_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("[1, 2]")
        code, _, err = run(capsys, "dk", "--config", str(cfg))
        assert code == 2
        assert "JSON object" in err

    def test_missing_config_file(self, capsys):
        code, _, err = run(capsys, "dk", "--config", "/nonexistent.json")
        assert code == 2
        assert "cannot read config" in err


class TestSolve:
    def test_grid_csv(self, tmp_path, capsys):
        out = tmp_path / "u.csv"
        code, _, _ = run(capsys, "solve", "--alpha", "0.5", "--coeffs",
                         "1,0.5j", "--r", "0.4,0.8", "--phi", "0,1.0",
                         "--times", "0.5", "--out", str(out))
        assert code == 0
        rows = list(csv.reader(out.open(newline="")))
        assert rows[0] == ["r", "phi", "t", "re_u", "im_u"]
        assert len(rows) == 1 + 2 * 2 * 1

    def test_t_zero_reproduces_datum(self, tmp_path, capsys):
        out = tmp_path / "u.csv"
        run(capsys, "solve", "--alpha", "0.7", "--coeffs", "0,1", "--r",
            "0.6", "--phi", "0", "--times", "0", "--out", str(out))
        rows = list(csv.reader(out.open(newline="")))
        assert float(rows[1][3]) == pytest.approx(0.6, rel=1e-15)


class TestDensity:
    def test_normalized_table(self, tmp_path, capsys):
        out = tmp_path / "dens.csv"
        code, _, _ = run(capsys, "density", "--alpha", "0.5", "--t", "1.0",
                         "--n-phi", "256", "--k-cap", "64", "--out", str(out))
        assert code == 0
        rows = list(csv.reader(out.open(newline="")))
        assert rows[0] == ["phi", "mu"]
        vals = [float(r[1]) for r in rows[1:]]
        assert len(vals) == 256
        # rectangle rule is exact for the truncated Fourier series
        assert sum(vals) * 2.0 * math.pi / 256 == pytest.approx(1.0,
                                                                abs=1e-10)


class TestSeededCommands:
    def test_moments_json_and_seed_echo(self, tmp_path, capsys):
        out = tmp_path / "m.json"
        code, _, err = run(capsys, "moments", "--alpha", "0.5", "--t", "1.0",
                           "--rs", "1", "--n-paths", "2000", "--step-dt",
                           "0.01", "--seed", "123", "--out", str(out))
        assert code == 0
        assert "fracdisk: seed = 123" in err
        payload = json.loads(out.read_text())
        assert payload["config"]["seed"] == 123
        assert payload["config"]["command"] == "moments"
        assert len(payload["reports"]) == 2
        assert {"analytic", "mc", "se", "pass"} <= set(payload["reports"][0])

    def test_env_seed_used(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("FRACDISK_SEED", "777")
        out = tmp_path / "m.json"
        code, _, err = run(capsys, "mixed", "--alpha", "0.5", "--s", "0.4",
                           "--t", "1.0", "--n-paths", "1000", "--step-dt",
                           "0.01", "--out", str(out))
        assert code == 0
        assert "fracdisk: seed = 777" in err
        assert json.loads(out.read_text())["config"]["seed"] == 777

    def test_fresh_seed_reported(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv("FRACDISK_SEED", raising=False)
        out = tmp_path / "m.json"
        code, _, err = run(capsys, "mixed", "--alpha", "0.5", "--s", "0.5",
                           "--t", "0.5", "--n-paths", "10", "--step-dt",
                           "0.1", "--out", str(out))
        assert code == 0
        line = [l for l in err.splitlines() if l.startswith("fracdisk: seed")]
        assert len(line) == 1
        seed = int(line[0].split("=")[1])
        assert json.loads(out.read_text())["config"]["seed"] == seed

    def test_mixed_routes_agree(self, tmp_path, capsys):
        out = tmp_path / "mx.json"
        code, _, _ = run(capsys, "mixed", "--alpha", "0.5", "--s", "0.4",
                         "--t", "1.0", "--n-paths", "20000", "--step-dt",
                         "0.005", "--seed", "42", "--out", str(out))
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["series"] == pytest.approx(payload["integral"],
                                                  rel=1e-8)
        assert payload["pass"] is True

    def test_mixed_tempered_has_no_closed_form(self, tmp_path, capsys):
        out = tmp_path / "mx.json"
        code, _, _ = run(capsys, "mixed", "--alpha", "0.6", "--mu", "1.5",
                         "--s", "0.4", "--t", "1.0", "--n-paths", "500",
                         "--step-dt", "0.02", "--seed", "1", "--out",
                         str(out))
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["series"] is None
        assert payload["integral"] is None
        assert payload["pass"] is None

    def test_ctrw_report(self, tmp_path, capsys):
        out = tmp_path / "c.json"
        code, _, _ = run(capsys, "ctrw", "--alpha", "0.5", "--t", "0.5",
                         "--k-max", "1", "--scales", "4,16", "--n-paths",
                         "1000", "--seed", "3", "--out", str(out))
        assert code == 0
        payload = json.loads(out.read_text())
        assert "gamma_pooled" in payload
        assert payload["config"]["rao_blackwell"] is True
        assert payload["config"]["jump_mode"] == "exact_stable"

    def test_ctrw_rejects_tempered(self, capsys):
        code, _, err = run(capsys, "ctrw", "--alpha", "0.5", "--mu", "1.0",
                           "--t", "0.5")
        assert code == 2
        assert "stable clock" in err
