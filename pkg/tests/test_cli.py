import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from plasmonshape import cli, config, experiments, materials
from plasmonshape.errors import ConfigError


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


# --- config ------------------------------------------------------------------

def test_defaults():
    cfg = config.load()
    assert cfg["incident"]["angle"] == pytest.approx(math.pi / 3)
    assert cfg["material"]["eps_m"] == 1.0 and cfg["material"]["mu_m"] == 1.0
    assert cfg["material"]["eps_c"] == 2.0 and cfg["material"]["mu_c"] == 5.0
    assert cfg["grid"]["R0"] == 1.5 and cfg["grid"]["n"] == 25 and cfg["grid"]["n_synth"] == 32
    assert cfg["sampling"]["n_samples"] == 10000


@pytest.mark.parametrize("raw", ["-1+0.004j", "-1+0.004i", [-1.0, 0.004]])
def test_complex_forms(raw):
    assert config.parse_complex(raw) == -1 + 0.004j


def test_bad_complex():
    with pytest.raises(ConfigError):
        config.parse_complex("abc")
    with pytest.raises(ConfigError):
        config.parse_complex(True)


def test_two_material_forms_rejected():
    text = "[material]\nmu_c = 5.0\nlambda = -0.75\n"
    with pytest.raises(ConfigError, match="line 1"):
        config.load(text=text)


def test_unknown_section_line():
    with pytest.raises(ConfigError, match="line 3: unknown section"):
        config.load(text="[grid]\nn = 25\n[bogus]\nx = 1\n")


def test_syntax_error_line():
    with pytest.raises(ConfigError, match="line 2"):
        config.load(text="[grid]\nn = = 3\n")


def test_value_error_line():
    with pytest.raises(ConfigError, match="line 3: material.omega"):
        config.load(text="[material]\nmu_c = 5.0\nomega = -1.0\n")


def test_override_switches_material_form():
    cfg = config.load(text="[material]\nmu_c = 5.0\n", overrides=["material.lambda=0.0393+0.001j"])
    assert "mu_c" not in cfg["material"]
    assert cfg["material"]["lambda"] == 0.0393 + 0.001j
    mat = experiments.build_material(cfg["material"])
    assert mat.mu_c == pytest.approx(materials.mu_of_lambda(1.0, 0.0393 + 0.001j))


def test_drude_material():
    text = ("[material]\nomega = 0.01\n[material.drude]\nmu_0 = 1.0\nfilling = 0.8\nomega_0 = 1.0\n"
            "tau = 100.0\nlambda_target = 0.1856\nbracket = [1.05, 2.0]\n")
    cfg = config.load(text=text)
    mat = experiments.build_material(cfg["material"])
    assert abs(mat.lam.real - 0.1856) < 1e-8


def test_drude_missing_key():
    with pytest.raises(ConfigError, match="material.drude.tau"):
        config.load(text="[material.drude]\nmu_0 = 1.0\nfilling = 0.8\nomega_0 = 1.0\n")


def test_build_shape_variants():
    t = np.linspace(0, 6, 5)
    assert np.allclose(experiments.build_shape({"kind": "disk", "params": []}).radius(t), 0.8)
    fit = experiments.build_shape({"kind": "peanut", "params": [], "fit_order": 3})
    assert fit.kind == "trig_series" and fit.order == 3
    scaled = experiments.build_shape({"kind": "disk", "params": [1.0], "scale": 0.5})
    assert np.allclose(scaled.radius(t), 0.5)


# --- CLI -----------------------------------------------------------------------

def test_unknown_verb_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["bogus"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_config_error_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.toml"
    p.write_text("[grid]\nn = 4\n")
    code, _, err = run_cli(["forward", "--config", str(p), "--out", str(tmp_path / "o")], capsys)
    assert code == 2
    assert "line 2" in err and "usage" in err


def test_numerical_error_exit_1(tmp_path, capsys):
    code, _, err = run_cli(["forward", "--set", "shape.kind=\"trig_series\"", "--set", "shape.params=[0.1, 0.5, 0.0]",
                            "--out", str(tmp_path)], capsys)
    assert code == 1
    assert "NonPositiveRadius" in err


def test_repro_table_needs_number(tmp_path, capsys):
    code, _, err = run_cli(["repro-table", "--out", str(tmp_path)], capsys)
    assert code == 2


def test_forward_oracle(tmp_path, capsys):
    code, out, _ = run_cli(["forward", "--oracle", "--out", str(tmp_path)], capsys)
    assert code == 0
    summary = json.loads(out)
    assert summary["max_rel_diff"] < 1e-8
    rows = read_csv(tmp_path / "forward.csv")
    assert rows[0] == ["t_obs", "re_us", "im_us", "abs_us"] and len(rows) == 51
    oracle = read_csv(tmp_path / "oracle.csv")
    assert oracle[0][-1] == "abs_diff" and len(oracle) == 51
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["verb"] == "forward" and manifest["config"]["material"]["mu_c"] == [5.0, 0.0]
    assert set(manifest["files"]) == {"forward.csv", "oracle.csv"}


def test_seventeen_digits(tmp_path, capsys):
    run_cli(["forward", "--out", str(tmp_path)], capsys)
    val = read_csv(tmp_path / "forward.csv")[2][1]
    assert float(val) != 0 and len(val.lstrip("-").replace(".", "").lstrip("0").split("e")[0]) >= 15


def test_reruns_bit_identical(tmp_path, capsys):
    args = ["reconstruct", "--set", "shape.kind=\"peach\"", "--set", "material.mu_c=\"-0.7372+0.1521j\"",
            "--seed", "3"]
    run_cli(args + ["--out", str(tmp_path / "a")], capsys)
    run_cli(args + ["--out", str(tmp_path / "b")], capsys)
    for name in ("coefficients.csv", "curve.csv", "iterations.csv", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize("verb,files", [
    ("np-spectrum", {"np_spectrum.csv"}),
    ("ssf-scan", {"ssf_scan.csv"}),
    ("resonance-scan", {"resonance_scan.csv"}),
    ("svd", {"svd_0.csv", "svd_summary.csv"}),
])
def test_verbs_write_outputs(verb, files, tmp_path, capsys):
    code, _, _ = run_cli([verb, "--out", str(tmp_path)], capsys)
    assert code == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert set(manifest["files"]) == files
    for f in files:
        rows = read_csv(tmp_path / f)
        assert len(rows) > 1 and all(len(r) == len(rows[0]) for r in rows)


def test_ssf_scan_columns(tmp_path, capsys):
    run_cli(["ssf-scan", "--set", "material.mu_c=\"-1+0.004j\"", "--out", str(tmp_path)], capsys)
    rows = read_csv(tmp_path / "ssf_scan.csv")
    assert rows[0] == ["zeta", "sqrt_perimeter", "max_curvature", "ssf_norm"]
    assert len(rows) == 6


def test_drude_resonance_scan(tmp_path, capsys):
    p = tmp_path / "drude.toml"
    p.write_text("[material.drude]\nmu_0 = 1.0\nfilling = 0.8\nomega_0 = 1.0\ntau = 100.0\n"
                 "lambda_target = 0.1856\nbracket = [1.05, 2.0]\n[scan]\nomegas = [1.1, 1.2, 1.3]\n")
    code, out, _ = run_cli(["resonance-scan", "--config", str(p), "--out", str(tmp_path / "o")], capsys)
    assert code == 0
    assert 1.05 < json.loads(out)["resonant_omega"] < 2.0
    assert len(read_csv(tmp_path / "o" / "resonance_scan.csv")) == 4


def test_sample_verb(tmp_path, capsys):
    code, out, _ = run_cli(["sample", "--set", "shape.kind=\"peach\"", "--set", "material.mu_c=\"-0.7372+0.1521j\"",
                            "--set", "sampling.n_samples=2000", "--out", str(tmp_path)], capsys)
    assert code == 0
    rows = read_csv(tmp_path / "bands.csv")
    assert rows[0] == ["t", "q_true", "q_mean", "q_lo", "q_hi"]
    assert json.loads(out)["coverage"] >= 0.9


def test_repro_table_3(tmp_path, capsys):
    code, out, _ = run_cli(["repro-table", "3", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert {"table3.csv", "table3_reference_format.csv"} <= set(json.loads((tmp_path / "manifest.json").read_text())["files"])


def test_repro_table_2_worker_pool_matches_serial():
    lam = [0.0393 + 1e-3j]
    a = experiments.table2_runs(lam, [0.01], [1, 2], workers=1)
    b = experiments.table2_runs(lam, [0.01], [1, 2], workers=2)
    np.testing.assert_array_equal(np.array(a, dtype=complex), np.array(b, dtype=complex))


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "plasmonshape", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "repro-table" in out.stdout
