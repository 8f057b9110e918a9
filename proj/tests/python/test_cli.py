import json
import os
import subprocess

import pytest

CLI = os.environ.get("RECOMB_CLI", "recomb")

THREE_SITE = {
    "layout": {"n_sites": 3, "rho": [0.1, 0.2]},
    "p0": {"kind": "table", "weights": [0.2, 0.1, 0.05, 0.15, 0.1, 0.1, 0.05, 0.25]},
    "seed": 12345,
}


def run(*args, env=None):
    merged = dict(os.environ)
    if env:
        merged.update(env)
    return subprocess.run(
        [CLI, *args], capture_output=True, text=True, env=merged
    )


def write_config(tmp_path, body, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(body))
    return str(path)


def entry_value(doc, labels):
    for entry in doc["entries"]:
        if entry["links"] == labels:
            return entry["value"]
    raise AssertionError(f"no entry for {labels}")


def test_forward_zero_steps_echoes_p0(tmp_path):
    cfg = write_config(tmp_path, THREE_SITE)
    result = run("forward", "--config", cfg, "--steps", "0")
    assert result.returncode == 0
    doc = json.loads(result.stdout)
    assert doc["steps"] == 0
    assert len(doc["trajectory"]) == 1
    weights = doc["trajectory"][0]["weights"]
    assert weights == pytest.approx(THREE_SITE["p0"]["weights"], abs=1e-15)


def test_forward_reports_reconstruction_gap(tmp_path):
    cfg = write_config(tmp_path, THREE_SITE)
    result = run(
        "forward", "--config", cfg, "--steps", "12", "--check-reconstruction"
    )
    assert result.returncode == 0
    doc = json.loads(result.stdout)
    assert len(doc["trajectory"]) == 13
    assert doc["reconstruction_max_gap"] <= 1e-12


def test_coeffs_worked_values(tmp_path):
    cfg = write_config(tmp_path, THREE_SITE)
    result = run("coeffs", "--config", cfg, "--steps", "2")
    assert result.returncode == 0
    doc = json.loads(result.stdout)
    assert doc["method"] == "recursion"
    assert doc["t"] == 2
    assert entry_value(doc, []) == pytest.approx(0.49, abs=1e-12)
    assert entry_value(doc, ["1/2"]) == pytest.approx(0.15, abs=1e-12)
    assert entry_value(doc, ["3/2"]) == pytest.approx(0.32, abs=1e-12)
    assert entry_value(doc, ["1/2", "3/2"]) == pytest.approx(0.04, abs=1e-12)
    meta = doc["meta"]
    assert meta["seed"] == 12345
    assert meta["version"] == "0.1.0"
    assert meta["config_hash"].startswith("0x") and len(meta["config_hash"]) == 18


def test_coeffs_method_from_config(tmp_path):
    cfg = write_config(tmp_path, {**THREE_SITE, "method": "art"})
    result = run("coeffs", "--config", cfg, "--steps", "2")
    assert result.returncode == 0
    doc = json.loads(result.stdout)
    assert doc["method"] == "art"
    assert entry_value(doc, ["1/2", "3/2"]) == pytest.approx(0.04, abs=1e-12)


def test_coeffs_mc_scientific_replicates(tmp_path):
    cfg = write_config(tmp_path, THREE_SITE)
    result = run(
        "coeffs", "--config", cfg, "--method", "mc", "--replicates", "1e6"
    )
    assert result.returncode == 0
    doc = json.loads(result.stdout)
    assert doc["replicates"] == 1000000
    exact = {(): 0.7, ("1/2",): 0.1, ("3/2",): 0.2, ("1/2", "3/2"): 0.0}
    for entry in doc["entries"]:
        want = exact[tuple(entry["links"])]
        assert abs(entry["value"] - want) <= 4.0 * entry["std_error"] + 1e-9


def test_compare_default_methods(tmp_path):
    cfg = write_config(tmp_path, THREE_SITE)
    result = run("compare", "--config", cfg, "--steps", "7")
    assert result.returncode == 0
    doc = json.loads(result.stdout)
    assert doc["methods"] == ["recursion", "art", "oracle"]
    assert doc["max_abs_gap"] <= 1e-12
    assert len(doc["entries"]) == 4


def test_trees_shapes_and_probabilities(tmp_path):
    cfg = write_config(tmp_path, THREE_SITE)
    result = run("trees", "--config", cfg, "--steps", "2", "--verbose")
    assert result.returncode == 0
    doc = json.loads(result.stdout)
    assert doc["count"] == 2
    assert doc["links"] == ["1/2", "3/2"]
    for tree in doc["trees"]:
        assert tree["probability"] == pytest.approx(0.02, abs=1e-12)
        assert sum(term["value"] for term in tree["terms"]) == pytest.approx(
            tree["probability"], abs=1e-15
        )
    assert doc["total_probability"] == pytest.approx(0.04, abs=1e-12)


def test_trees_single_link_formula(tmp_path):
    cfg = write_config(tmp_path, THREE_SITE)
    result = run("trees", "--config", cfg, "--steps", "3", "--links", "1/2")
    assert result.returncode == 0
    doc = json.loads(result.stdout)
    assert doc["count"] == 1
    assert doc["trees"][0]["probability"] == pytest.approx(
        0.8**3 - 0.7**3, abs=1e-12
    )


def test_segmentation_deterministic_and_validated(tmp_path):
    cfg = write_config(tmp_path, THREE_SITE)
    first = tmp_path / "runs_a.jsonl"
    second = tmp_path / "runs_b.jsonl"
    for out in (first, second):
        result = run(
            "simulate",
            "segmentation",
            "--config",
            cfg,
            "--steps",
            "4",
            "--replicates",
            "60",
            "--out",
            str(out),
        )
        assert result.returncode == 0
    assert first.read_bytes() == second.read_bytes()

    lines = [json.loads(line) for line in first.read_text().splitlines()]
    assert len(lines) == 60
    assert {rec["replicate"] for rec in lines} == set(range(60))

    result = run(
        "trees", "--config", cfg, "--steps", "4", "--validate", str(first)
    )
    assert result.returncode == 0
    doc = json.loads(result.stdout)
    assert doc["status"] == "ok"
    assert doc["records"] == 60


def test_segmentation_threads_agree(tmp_path):
    cfg = write_config(tmp_path, THREE_SITE)
    a = tmp_path / "freq_a.json"
    b = tmp_path / "freq_b.json"
    r1 = run(
        "simulate", "segmentation", "--config", cfg, "--steps", "3",
        "--replicates", "5000", "--threads", "1",
        "--out", str(tmp_path / "runs1.jsonl"), "--freq-out", str(a),
    )
    r2 = run(
        "simulate", "segmentation", "--config", cfg, "--steps", "3",
        "--replicates", "5000",
        "--out", str(tmp_path / "runs2.jsonl"), "--freq-out", str(b),
        env={"RECOMB_THREADS": "3"},
    )
    assert r1.returncode == 0 and r2.returncode == 0
    doc_a = json.loads(a.read_text())
    doc_b = json.loads(b.read_text())
    assert doc_a["entries"] == doc_b["entries"]


def test_simulate_wf_csv_and_summary(tmp_path):
    cfg = write_config(tmp_path, THREE_SITE)
    csv_path = tmp_path / "wf.csv"
    result = run(
        "simulate", "wf", "--config", cfg, "--steps", "2", "--replicates", "3",
        "--pop-size", "50", "--out", str(csv_path),
    )
    assert result.returncode == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("# config_hash=0x")
    assert lines[1] == "# seed=12345"
    assert lines[2] == "# version=0.1.0"
    assert lines[3] == "# population_size=50"
    assert lines[4] == "replicate,t,type_index,freq"
    data = lines[5:]
    assert len(data) == 3 * 3 * 8
    for row in data:
        rep, t, x, freq = row.split(",")
        assert 0 <= int(rep) < 3 and 0 <= int(t) <= 2 and 0 <= int(x) < 8
        assert 0.0 <= float(freq) <= 1.0

    summary = tmp_path / "summary.json"
    result = run(
        "simulate", "wf", "--config", cfg, "--steps", "2", "--replicates", "50",
        "--pop-size", "100,1000", "--summary-out", str(summary),
    )
    assert result.returncode == 0
    doc = json.loads(summary.read_text())
    table = {row["population_size"]: row["mean_sq_error"] for row in doc["mse_vs_n"]}
    assert set(table) == {100, 1000}
    assert table[100] > table[1000] > 0.0


def test_simulate_ancestry_records(tmp_path):
    cfg = write_config(tmp_path, THREE_SITE)
    out = tmp_path / "ancestry.jsonl"
    stats = tmp_path / "stats.json"
    result = run(
        "simulate", "ancestry", "--config", cfg, "--steps", "3",
        "--replicates", "2", "--pop-size", "200",
        "--out", str(out), "--stats-out", str(stats),
    )
    assert result.returncode == 0
    lines = [json.loads(line) for line in out.read_text().splitlines()]
    # per replicate: 4 sigma stages, 3 refined stages, 1 summary line
    assert len(lines) == 2 * 8
    sigma0 = lines[0]
    assert sigma0["stage"] == "sigma" and sigma0["tau"] == 0
    assert sigma0["parts"] == [[0, 1, 2]]
    summary = json.loads(stats.read_text())
    assert summary["population_size"] == 200
    assert summary["lower_bound"] == pytest.approx(1 - 2 * 3 * 3 / 400, abs=1e-12)
    assert 0.0 <= summary["coalescence_free_rate"] <= 1.0


def test_exit_code_usage_errors(tmp_path):
    cfg = write_config(tmp_path, THREE_SITE)
    assert run("coeffs", "--config", cfg, "--no-such-flag").returncode == 1
    assert run("coeffs", "--config", cfg, "--method", "nosuch").returncode == 1
    assert run("nosuchcommand").returncode == 1
    assert run("simulate").returncode == 1
    bad_reps = run("coeffs", "--config", cfg, "--method", "mc", "--replicates", "-3")
    assert bad_reps.returncode == 1
    assert "replicates" in bad_reps.stderr


def test_exit_code_validation_errors(tmp_path):
    bad = write_config(
        tmp_path, {"layout": {"n_sites": 3, "rho": [0.6, 0.7]}}, "bad.json"
    )
    result = run("coeffs", "--config", bad)
    assert result.returncode == 2
    assert "validation error" in result.stderr

    assert run("coeffs", "--config", str(tmp_path / "missing.json")).returncode == 2

    unknown_key = write_config(
        tmp_path,
        {"layout": {"n_sites": 3, "rho": [0.1, 0.2]}, "bogus": 1},
        "unknown.json",
    )
    assert run("coeffs", "--config", unknown_key).returncode == 2


def test_exit_code_feasibility(tmp_path):
    wide = write_config(
        tmp_path,
        {"layout": {"n_sites": 14, "rho": [0.01] * 13}},
        "wide.json",
    )
    result = run("coeffs", "--config", wide, "--method", "oracle")
    assert result.returncode == 3
    assert "feasibility error" in result.stderr
