import hashlib
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.runner import load_config, parse_config, run_scenario
from src.runner.run_all import run_directory

SCENARIO_DIR = Path(__file__).resolve().parents[1] / "scenarios"

GAUSSIAN_TWO_LEVEL = """
[scenario]
kind = quantum_evolve
name = gaussian two-level

[model]
family = gaussian
tau = 0.1

[system]
energies = 0, 1

[time]
t_end = 5
n_points = 11
"""

DECAY_MC = """
[scenario]
kind = decay_law
name = decay mc

[model]
tau = 0.1

[decay]
lifetime = 1

[time]
t_end = 2
n_points = 5

[sampler]
seed = 99
n_samples = 5000
"""


def _summary_fields(path: Path) -> dict[str, str]:
    fields = {}
    for line in path.read_text().splitlines():
        key, _, value = line.partition(" = ")
        fields[key] = value
    return fields


@pytest.mark.parametrize("path", sorted(SCENARIO_DIR.glob("*.cfg")), ids=lambda p: p.stem)
def test_bundled_scenarios_parse(path):
    cfg, text = load_config(path)
    assert text
    assert cfg.scenario.name


def test_gaussian_two_level_coherence(tmp_path):
    summary, written = run_scenario(parse_config(GAUSSIAN_TWO_LEVEL), tmp_path, GAUSSIAN_TWO_LEVEL)
    assert summary.passed
    csv = tmp_path / "gaussian_two_level.csv"
    assert csv in written

    df = pd.read_csv(csv)
    assert list(df.columns) == ["t", "entropy", "purity", "Re_R01", "Im_R01"]
    magnitude = np.hypot(df["Re_R01"], df["Im_R01"])
    np.testing.assert_allclose(magnitude, 0.5 * np.exp(-0.1 * df["t"]), rtol=0, atol=1e-9)
    assert (np.diff(df["entropy"]) >= -1e-12).all()


def test_summary_format(tmp_path):
    summary, _ = run_scenario(parse_config(GAUSSIAN_TWO_LEVEL), tmp_path, GAUSSIAN_TWO_LEVEL)
    fields = _summary_fields(tmp_path / "gaussian_two_level_summary.txt")

    assert fields["scenario"] == "gaussian two-level"
    assert fields["kind"] == "quantum_evolve"
    assert fields["passed"] == "true"
    assert fields["verdict.trace_preserved"] == "pass"
    assert fields["verdict.entropy_non_decreasing"] == "pass"
    assert float(fields["scalar.final_purity"]) == pytest.approx(summary.scalars["final_purity"], rel=1e-15)
    assert "e" in fields["threshold.trace_tol"]
    assert fields["config_sha256"] == hashlib.sha256(GAUSSIAN_TWO_LEVEL.encode()).hexdigest()
    assert "wall_clock_s" not in fields
    assert summary.wall_clock >= 0


def test_runs_are_byte_identical(tmp_path):
    cfg = parse_config(DECAY_MC)
    run_scenario(cfg, tmp_path / "a", DECAY_MC)
    run_scenario(cfg, tmp_path / "b", DECAY_MC)
    for name in ("decay_mc.csv", "decay_mc_summary.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_seed_override_changes_samples_and_hash(tmp_path):
    cfg = parse_config(DECAY_MC)
    base, _ = run_scenario(cfg, tmp_path / "a", DECAY_MC)
    other, _ = run_scenario(cfg, tmp_path / "b", DECAY_MC, seed_override=5)
    assert base.config_hash != other.config_hash
    a = pd.read_csv(tmp_path / "a" / "decay_mc.csv")
    b = pd.read_csv(tmp_path / "b" / "decay_mc.csv")
    pd.testing.assert_series_equal(a["survival"], b["survival"])
    assert not np.array_equal(a["mc_mean"].iloc[1:], b["mc_mean"].iloc[1:])
    assert other.verdicts["mc_agrees"]


def test_oracle_scenario_agrees(tmp_path):
    cfg, text = load_config(SCENARIO_DIR / "oracle_compare.cfg")
    summary, _ = run_scenario(cfg, tmp_path, text)
    assert summary.scalars["n_samples"] == 100_000
    assert summary.scalars["max_z_score"] <= 5.0
    assert summary.verdicts == {"oracle_agrees": True}

    df = pd.read_csv(tmp_path / "three_level_oracle.csv")
    assert {"Re_R01_oracle", "Im_R12_oracle", "max_z"} <= set(df.columns)


def test_estimate_scenario(tmp_path):
    cfg, text = load_config(SCENARIO_DIR / "estimate_hyperfine.cfg")
    summary, _ = run_scenario(cfg, tmp_path, text)
    assert summary.passed
    assert 60 < summary.scalars["decoherence_time"] < 3600
    assert summary.scalars["tau_upper_bound"] == pytest.approx(1e-23)
    assert summary.scalars["meson_tau_strong"] == pytest.approx(1e-11, rel=0.01)


def test_coarse_grid_fails_variance_verdict(tmp_path):
    text = """
[scenario]
kind = classical_pde
name = coarse

[model]
tau = 0.01

[classical]
v = 1
sigma0 = 0.5
x_min = -8
x_max = 6
n_cells = 64

[time]
t_end = 1
n_points = 6
"""
    summary, _ = run_scenario(parse_config(text), tmp_path, text)
    assert not summary.passed
    assert summary.verdicts["mass_conserved"]
    assert summary.verdicts["mean_slope_matches"]
    assert not summary.verdicts["variance_rate_matches"]
    assert _summary_fields(tmp_path / "coarse_summary.txt")["verdict.variance_rate_matches"] == "fail"


def test_svg_only_when_requested(tmp_path):
    text = GAUSSIAN_TWO_LEVEL + "\n[outputs]\nsvg = figs/coherence.svg\n"
    _, written = run_scenario(parse_config(text), tmp_path, text)
    svg = tmp_path / "figs" / "coherence.svg"
    assert svg in written
    assert "<svg" in svg.read_text()

    _, written = run_scenario(parse_config(GAUSSIAN_TWO_LEVEL), tmp_path / "plain", GAUSSIAN_TWO_LEVEL)
    assert not any(p.suffix == ".svg" for p in written)


def test_lemma_fuzz_scenario(tmp_path):
    text = """
[scenario]
kind = lemma_fuzz
name = small fuzz

[lemma]
n_instances = 300
max_dim = 5
brute_force_dim = 3

[sampler]
seed = 1
"""
    summary, _ = run_scenario(parse_config(text), tmp_path, text)
    assert summary.passed
    assert summary.scalars["failures"] == 0
    assert summary.scalars["min_margin"] >= -1e-12
    df = pd.read_csv(tmp_path / "small_fuzz.csv")
    assert df["instances"].sum() == 300


def test_wavepacket_scenario(tmp_path):
    text = """
[scenario]
kind = wavepacket
name = packet

[model]
family = gaussian
tau = 0.01

[wavepacket]
m = 1
delta_x = 1

[time]
t_start = 1
t_end = 21
n_points = 3
"""
    summary, _ = run_scenario(parse_config(text), tmp_path, text)
    assert summary.passed
    df = pd.read_csv(tmp_path / "packet.csv")
    assert (df["peak_averaged"] <= df["peak_conventional"] * 1.01).all()
    assert df["peak_conventional"].is_monotonic_decreasing


def test_run_directory_continues_past_failures(tmp_path, capsys):
    scenarios = tmp_path / "scenarios"
    scenarios.mkdir()
    (scenarios / "a_good.cfg").write_text((SCENARIO_DIR / "estimate_hyperfine.cfg").read_text())
    (scenarios / "b_bad.cfg").write_text("[scenario]\nkind = estimate\n[estimat]\ntau = 1\n")

    passed, failed = run_directory(scenarios, tmp_path / "reports")
    assert passed == 1
    assert [name for name, _ in failed] == ["b_bad.cfg"]
    out = capsys.readouterr().out
    assert "Success: 1/2" in out
    assert "Failed: b_bad.cfg" in out


def test_run_directory_survives_unexpected_exceptions(tmp_path, monkeypatch, capsys):
    import src.runner.run_all as run_all

    scenarios = tmp_path / "scenarios"
    scenarios.mkdir()
    good = (SCENARIO_DIR / "estimate_hyperfine.cfg").read_text()
    (scenarios / "a_broken.cfg").write_text(good)
    (scenarios / "b_good.cfg").write_text(good)

    real = run_all.run_scenario
    calls = []

    def flaky(cfg, out_dir, text):
        calls.append(cfg.scenario.name)
        if len(calls) == 1:
            raise IndexError("index 5 is out of bounds for axis 0 with size 2")
        return real(cfg, out_dir, text)

    monkeypatch.setattr(run_all, "run_scenario", flaky)
    passed, failed = run_directory(scenarios, tmp_path / "reports")
    assert len(calls) == 2
    assert passed == 1
    assert len(failed) == 1
    name, reason = failed[0]
    assert name == "a_broken.cfg"
    assert reason.startswith("IndexError:")
    assert "Success: 1/2" in capsys.readouterr().out


def test_entropy_audit_at_largest_step(tmp_path):
    text = """
[scenario]
kind = entropy_audit
name = audit three-level

[model]
family = poisson
tau = 0.1

[system]
energies = 0, 1, 2.5
elements = 0:1, 1:2
mixing = 0.1

[time]
t_end = 1
dt = 0.01
"""
    summary, _ = run_scenario(parse_config(text), tmp_path, text)
    assert summary.verdicts == {"entropy_non_decreasing": True, "rate_matches_finite_difference": True}
    df = pd.read_csv(tmp_path / "audit_three_level.csv")
    assert len(df) == 101
    assert np.isnan(df["fd_rate"].iloc[0]) and np.isnan(df["fd_rate"].iloc[-1])
    interior = df.iloc[1:-1]
    np.testing.assert_allclose(interior["fd_rate"], interior["entropy_rate"], rtol=1e-3, atol=1e-6)
