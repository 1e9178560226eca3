import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from corrdecay.cli import main

DATA = Path(__file__).parent / "data" / "rb87_53s_transitions.csv"


def test_gamma_smoke(tmp_path):
    out = tmp_path / "run"
    rc = main(["gamma", "--dim", "2", "--n", "10", "--d", "0.4", "--pol", "x",
               "--out", str(out)])
    assert rc == 0
    lines = (out / "coupling.csv").read_text().splitlines()
    assert lines[0] == "i,j,gamma,jcoupling"
    assert len(lines) == 1 + 100 * 100
    diag = json.loads((out / "psd.json").read_text())
    assert diag["passed"]
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "gamma"
    assert "config_sha256" in manifest and "wall_time_s" in manifest


def test_gamma_rejects_bad_n(tmp_path):
    assert main(["gamma", "--dim", "1", "--n", "0", "--d", "0.4",
                 "--out", str(tmp_path)]) == 2


def test_gamma_deterministic_outputs(tmp_path):
    args = ["gamma", "--dim", "1", "--n", "6", "--d", "0.35", "--pol", "z",
            "--eta", "0.03", "--seed", "17", "--output-format", "both"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    for name in ("coupling.csv", "gamma.bin", "jmat.bin", "psd.json", "lattice.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_analyze_dicke_surrogate(tmp_path):
    # near-zero separations: an 8-atom cluster decays like one big dipole
    rc = main(["analyze", "--dim", "3", "--n", "2", "--d", "1e-4", "--pol", "x",
               "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "analysis.json").read_text())
    assert abs(doc["exact"]["rstar_exact"] - 20.0) < 0.01
    assert abs(doc["bounds"]["ub"] - 92.0) < 0.05
    assert doc["bounds"]["lb_best"] >= 16.0 - 0.01
    assert doc["sdp"]["rstar_estimate"] <= doc["exact"]["rstar_exact"] + 1e-6


def test_analyze_noninteracting_equality(tmp_path):
    gamma = np.eye(8)
    from corrdecay.coupling import write_matrix_binary

    mat_file = tmp_path / "gamma.bin"
    write_matrix_binary(gamma, mat_file)
    rc = main(["analyze", "--gamma-file", str(mat_file), "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "analysis.json").read_text())
    assert np.isclose(doc["bounds"]["lb_best"], 8.0)
    assert np.isclose(doc["bounds"]["ub"], 8.0)
    assert np.isclose(doc["exact"]["rstar_exact"], 8.0)


def test_analyze_large_n_skips_exact(tmp_path):
    rc = main(["analyze", "--dim", "1", "--n", "30", "--d", "0.4", "--pol", "z",
               "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "analysis.json").read_text())
    assert "exact" not in doc
    assert "spectral" in doc and "bounds" in doc and "sdp" in doc


def test_analyze_rejects_non_psd_matrix(tmp_path):
    from corrdecay.coupling import write_matrix_binary

    bad = np.array([[1.0, 1.5], [1.5, 1.0]])
    mat_file = tmp_path / "bad.bin"
    write_matrix_binary(bad, mat_file)
    rc = main(["analyze", "--gamma-file", str(mat_file), "--out", str(tmp_path)])
    assert rc == 3


def test_scan_writes_table_and_fit(tmp_path):
    rc = main(["scan", "--dim", "1", "--d", "0.4", "--pol", "z",
               "--sizes", "8,16,32", "--quantity", "gamma_max",
               "--out", str(tmp_path)])
    assert rc == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0] == "n_atoms,value,stderr"
    fit = json.loads((tmp_path / "fit.json").read_text())
    assert "alpha" in fit and "r_squared" in fit


def test_scan_empty_sizes_rejected(tmp_path):
    # argparse rejects the unparsable empty list with its usual exit code 2
    with pytest.raises(SystemExit) as err:
        main(["scan", "--dim", "1", "--d", "0.4", "--sizes", "", "--out", str(tmp_path)])
    assert err.value.code == 2


def test_scan_range_spec(tmp_path):
    rc = main(["scan", "--dim", "1", "--d", "0.4", "--pol", "z", "--n-min", "4",
               "--n-max", "32", "--count", "4", "--out", str(tmp_path)])
    assert rc == 0


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"dim": 1, "n": 4, "d": 0.5, "pol": "z"}))
    out = tmp_path / "o1"
    assert main(["gamma", "--config", str(cfg), "--out", str(out)]) == 0
    spec = json.loads((out / "lattice.json").read_text())
    assert spec["n_per_axis"] == 4 and spec["spacing"] == 0.5
    out2 = tmp_path / "o2"
    assert main(["gamma", "--config", str(cfg), "--n", "6", "--out", str(out2)]) == 0
    spec2 = json.loads((out2 / "lattice.json").read_text())
    assert spec2["n_per_axis"] == 6  # flag wins


def test_config_unknown_key_rejected(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"dim": 1, "n": 4, "d": 0.5, "typo_key": 1}))
    assert main(["gamma", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_sdp_command(tmp_path):
    rc = main(["sdp", "--dim", "1", "--n", "10", "--d", "0.4", "--pol", "x",
               "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "sdp.json").read_text())
    assert doc["converged"]
    assert doc["rounded_product_value"] <= doc["value"] + 1e-6
    angles = (tmp_path / "product_angles.csv").read_text().splitlines()
    assert angles[0] == "phi" and len(angles) == 11


def test_exact_command(tmp_path):
    rc = main(["exact", "--dim", "1", "--n", "4", "--d", "1e-4", "--pol", "x",
               "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "exact.json").read_text())
    assert abs(doc["rstar_exact"] - 6.0) < 1e-3  # near-Dicke 4-atom cluster


def test_exact_size_guard(tmp_path):
    assert main(["exact", "--dim", "1", "--n", "25", "--d", "0.4",
                 "--out", str(tmp_path)]) == 2


def test_kspace_command(tmp_path):
    rc = main(["kspace", "--dim", "1", "--n", "64", "--d", "0.25",
               "--pol-tag", "parallel", "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "kspace.json").read_text())
    assert abs(doc["gamma_max_grid"] - 3.0) < 0.01
    lines = (tmp_path / "kspace.csv").read_text().splitlines()
    assert lines[0] == "kx,ky,kz,rate"
    assert len(lines) == 65


def test_rydberg_command(tmp_path):
    rc = main(["rydberg", "--table", str(DATA), "--n-atoms", "160",
               "--spacing-um", "2.0", "--c6", "28.8", "--rabi", "4.6",
               "--dominant", "53S12-52P32", "--exact-gamma-max-hz", "176",
               "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "rydberg.json").read_text())
    assert abs(doc["chi"] - 7.25e-6) < 0.02 * 7.25e-6


def test_rydberg_missing_dominant(tmp_path):
    rc = main(["rydberg", "--table", str(DATA), "--n-atoms", "160",
               "--spacing-um", "2.0", "--c6", "28.8", "--rabi", "4.6",
               "--dominant", "not-a-row", "--out", str(tmp_path)])
    assert rc == 2


def test_rydberg_requires_table(tmp_path):
    rc = main(["rydberg", "--n-atoms", "160", "--spacing-um", "2.0", "--c6", "28.8",
               "--rabi", "4.6", "--dominant", "x", "--out", str(tmp_path)])
    assert rc == 2


def test_analyze_emits_momentum_distribution(tmp_path):
    rc = main(["analyze", "--dim", "1", "--n", "12", "--d", "0.3", "--pol", "x",
               "--out", str(tmp_path)])
    assert rc == 0
    lines = (tmp_path / "momentum.csv").read_text().splitlines()
    assert lines[0] == "kx,ky,kz,weight"
    weights = np.array([float(l.split(",")[3]) for l in lines[1:]])
    assert abs(weights.sum() - 1.0) < 1e-10


def test_sdp_nonconvergence_exit_code(tmp_path):
    rc = main(["sdp", "--dim", "1", "--n", "40", "--d", "0.4", "--pol", "x",
               "--max-iters", "3", "--out", str(tmp_path)])
    assert rc == 4
    doc = json.loads((tmp_path / "sdp.json").read_text())
    assert not doc["converged"]  # best-so-far is still reported


def test_threads_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("CORRDECAY_THREADS", "3")
    rc = main(["scan", "--dim", "1", "--d", "0.4", "--pol", "z",
               "--sizes", "6,10,14", "--eta", "0.02", "--realizations", "2",
               "--out", str(tmp_path)])
    assert rc == 0
    monkeypatch.setenv("CORRDECAY_THREADS", "1")
    other = tmp_path / "single"
    rc = main(["scan", "--dim", "1", "--d", "0.4", "--pol", "z",
               "--sizes", "6,10,14", "--eta", "0.02", "--realizations", "2",
               "--out", str(other)])
    assert rc == 0
    # threading must not change the numbers
    assert (tmp_path / "sweep.csv").read_text() == (other / "sweep.csv").read_text()


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "corrdecay.cli", "gamma", "--dim", "1", "--n", "3",
         "--d", "0.5", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "coupling.csv").exists()
