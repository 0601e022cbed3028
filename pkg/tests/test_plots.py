"""Figure helpers: every renderer writes a non-empty PNG and returns its path."""

import numpy as np

from vortess import plots
from vortess.sampler import Diagnostics


def check(path, result):
    assert result == path
    assert path.is_file()
    assert path.stat().st_size > 0
    assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_roc_curve(tmp_path):
    points = ((0.0, 0.0), (0.0, 0.5), (0.5, 1.0), (1.0, 1.0))
    path = tmp_path / "roc.png"
    check(path, plots.save_roc_curve(points, 0.875, path))


def test_sweep_curve(tmp_path):
    path = tmp_path / "sweep.png"
    check(path, plots.save_sweep_curve([0.0, 0.1, 0.2], [0.99, 0.95, 0.91],
                                       "parameter", path))


def test_probability_lattice(tmp_path):
    axis = np.linspace(0, 1, 20)
    probs = np.tile(axis, (20, 1))
    path = tmp_path / "lattice.png"
    check(path, plots.save_probability_lattice(axis, axis, probs, path))


def test_probability_lattice_with_points(tmp_path):
    rng = np.random.default_rng(0)
    axis = np.linspace(0, 1, 10)
    pts = rng.random((30, 2))
    labels = rng.integers(0, 2, 30)
    path = tmp_path / "lattice.png"
    check(path, plots.save_probability_lattice(
        axis, axis, rng.random((10, 10)), path, points=pts, labels=labels))


def test_interval_plot(tmp_path):
    rng = np.random.default_rng(1)
    p = np.sort(rng.random(25))
    lo = np.clip(p - 0.1, 0, 1)
    hi = np.clip(p + 0.1, 0, 1)
    path = tmp_path / "intervals.png"
    check(path, plots.save_interval_plot(p, lo, hi, path,
                                         y_true=rng.integers(0, 2, 25)))


def test_inclusion_bars(tmp_path):
    path = tmp_path / "bars.png"
    check(path, plots.save_inclusion_bars(["x2", "x1", "x3"],
                                          [80.0, 55.0, 10.0], path))


def test_chain_trace(tmp_path):
    rng = np.random.default_rng(2)
    diag = Diagnostics(
        proposed=rng.integers(0, 5, (30, 6)).astype(np.int64),
        accepted=rng.integers(0, 3, (30, 6)).astype(np.int64),
        dim_counts=rng.integers(1, 4, (30, 8)).astype(np.int16),
        centre_counts=rng.integers(1, 9, (30, 8)).astype(np.int16),
    )
    path = tmp_path / "trace.png"
    check(path, plots.save_chain_trace(diag, path))


def test_benchmark_summary(tmp_path):
    rows = [
        {"dataset": "alpha", "mean_accuracy": 91.0, "sd_accuracy": 2.0,
         "reference_accuracy": 93.0, "mean_auc": 0.95, "sd_auc": 0.01,
         "reference_auc": 0.97},
        {"dataset": "beta", "mean_accuracy": 78.0, "sd_accuracy": 4.0,
         "reference_accuracy": 80.0, "mean_auc": 0.82, "sd_auc": 0.03,
         "reference_auc": 0.85},
    ]
    path = tmp_path / "bench.png"
    check(path, plots.save_benchmark_summary(rows, path))


def test_same_inputs_same_bytes(tmp_path):
    # figure output carries no timestamps, so reruns are byte-stable
    first = plots.save_sweep_curve([0.0, 0.5], [0.9, 0.8], "p", tmp_path / "a.png")
    second = plots.save_sweep_curve([0.0, 0.5], [0.9, 0.8], "p", tmp_path / "b.png")
    assert first.read_bytes() == second.read_bytes()
