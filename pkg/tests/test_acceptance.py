"""End-to-end acceptance gate: one test (one pass/fail line) per criterion.

Criteria 1-4 and 6 need dataset files that cannot be fetched from this
offline environment; they skip loudly when the files are absent and run
the full 20-split protocol when a populated data directory is supplied
(VORTESS_DATA_DIR or ./data; see scripts/fetch_benchmark_data.py).
Expect those, and the two full-length synthetic fits of criterion 5,
to take minutes each.
"""

import math

import numpy as np
import pandas as pd
import pytest
from scipy.integrate import quad
from scipy.stats import chisquare, norm

import vortess.cli as cli
from vortess.benchmark import DATASETS, SuiteConfig, resolve_data_dir, run_suite
from vortess.data import make_frame, write_csv
from vortess.latent import draw_latents
from vortess.metrics import roc_auc, roc_curve, trapezoid_area
from vortess.moves import MOVE_PROBABILITIES, MoveKind, mh_step, propose, propose_move
from vortess.priors import PriorConfig, TessellationPrior, loglik_from_partition
from vortess.sampler import SamplerConfig
from vortess.synthetic import ROTATED_AXIS, SINUSOID
from vortess.tessellation import Tessellation, cell_partition


def _line(number, text):
    print("criterion %02d: %s" % (number, text))


# ---- criteria 1-4: benchmark datasets ---------------------------------------

BANDS = {
    "breast_cancer": (1, 95.0, 0.980),
    "sonar": (2, 80.0, 0.90),
    "heart_failure": (3, 81.0, 0.87),
    "german_credit": (4, 73.0, 0.75),
}


def _dataset_band(name):
    number, acc_floor, auc_floor = BANDS[name]
    data_dir = resolve_data_dir()
    path = data_dir / DATASETS[name].filename
    if not path.is_file():
        pytest.skip(
            "dataset file %s not present; populate the data directory with "
            "scripts/fetch_benchmark_data.py on a networked host "
            "(this environment has no outbound network)" % path
        )
    suite = SuiteConfig(datasets=(name,), splits=20, seed=0,
                        sampler=SamplerConfig())
    result = run_suite(suite, data_dir=data_dir)
    assert result.ok, result.failures
    (summary,) = result.summary
    _line(number, "%s mean accuracy %.2f%% (floor %.1f), mean AUC %.4f (floor %.3f)"
          % (name, summary["mean_accuracy"], acc_floor,
             summary["mean_auc"], auc_floor))
    assert summary["mean_accuracy"] >= acc_floor
    assert summary["mean_auc"] >= auc_floor


def test_criterion_01_breast_cancer_band():
    _dataset_band("breast_cancer")


def test_criterion_02_sonar_band():
    _dataset_band("sonar")


def test_criterion_03_heart_failure_band():
    _dataset_band("heart_failure")


def test_criterion_04_german_credit_band():
    _dataset_band("german_credit")


# ---- criterion 5: synthetic accuracy at full defaults ------------------------

def test_criterion_05_synthetic_accuracy():
    config = SamplerConfig()
    acc_rot, _, _, _ = cli.simulate_point(ROTATED_AXIS, math.pi / 6, 1000,
                                          config, seed=5, point=0)
    acc_sin, _, _, _ = cli.simulate_point(SINUSOID, 0.5, 1000,
                                          config, seed=5, point=1)
    _line(5, "rotated-axis pi/6 accuracy %.4f, sinusoid 0.5 accuracy %.4f "
          "(floor 0.90 each)" % (acc_rot, acc_sin))
    assert acc_rot >= 0.90
    assert acc_sin >= 0.90


# ---- criterion 6: user-supplied mortgage data contract ----------------------

def test_criterion_06_hmda_contract(tmp_path):
    data_dir = resolve_data_dir()
    data_path = data_dir / "hmda.csv"
    if not data_path.is_file():
        pytest.skip(
            "user-supplied file %s not present; this criterion runs the "
            "end-to-end interval/inclusion contract when a compatible "
            "mortgage CSV is provided" % data_path
        )
    schema_path = data_dir / "hmda_schema.json"
    args = ["--schema", str(schema_path)] if schema_path.is_file() else []

    frame = pd.read_csv(data_path)
    cut = int(0.8 * len(frame))
    write_csv(frame.iloc[:cut], tmp_path / "train.csv")
    write_csv(frame.iloc[cut:], tmp_path / "test.csv")

    assert cli.main(["train", "--data", str(tmp_path / "train.csv"), *args,
                     "--out", str(tmp_path / "fit"), "--m", "50",
                     "--burn-in", "200", "--draws", "200", "--seed", "6"]) == 0
    model = str(tmp_path / "fit" / "model.vortess")
    assert cli.main(["predict", "--model", model,
                     "--data", str(tmp_path / "test.csv"), *args,
                     "--interval", "0.1", "--out", str(tmp_path / "pred")]) == 0
    pred = pd.read_csv(tmp_path / "pred" / "predictions.csv")
    assert list(pred.columns) == ["row", "p_hat", "class", "lo", "hi"]
    assert len(pred) == len(frame) - cut
    assert ((pred["lo"] <= pred["p_hat"]) & (pred["p_hat"] <= pred["hi"])).all()

    assert cli.main(["inclusion", "--model", model, "--aggregate",
                     "--out", str(tmp_path / "incl")]) == 0
    incl = pd.read_csv(tmp_path / "incl" / "inclusion.csv")
    assert len(incl) > 0
    assert incl["inclusion_pct"].between(0.0, 100.0).all()
    _line(6, "mortgage pipeline emitted %d interval rows and %d inclusion rows"
          % (len(pred), len(incl)))


# ---- criterion 7: nearest-centre oracle -------------------------------------

def test_criterion_07_nearest_centre_oracle():
    def brute_force(x, tess):
        best_idx, best_d2 = 0, None
        for idx in range(tess.centres.shape[0]):
            d2 = 0.0
            for j, dim in enumerate(tess.dims):
                diff = float(x[dim]) - float(tess.centres[idx, j])
                d2 += diff * diff
            if best_d2 is None or d2 < best_d2:
                best_d2, best_idx = d2, idx
        return best_idx

    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(100):
        p = int(rng.integers(1, 6))
        d = int(rng.integers(1, p + 1))
        dims = np.sort(rng.choice(p, size=d, replace=False))
        centres = rng.standard_normal((int(rng.integers(1, 9)), d))
        tess = Tessellation(dims, centres)
        X = rng.standard_normal((100, p))
        got = cell_partition(X, tess)
        want = np.array([brute_force(row, tess) for row in X])
        np.testing.assert_array_equal(got, want)
        checked += len(X)
    _line(7, "%d fuzzed queries matched brute force exactly" % checked)
    assert checked == 10_000


# ---- criterion 8: truncated-normal latent sampler ---------------------------

def test_criterion_08_truncated_normal_means():
    rng = np.random.default_rng(8)
    n = 10 ** 6
    worst = 0.0
    for z_hat in (-5.0, -1.0, 0.0, 1.0, 5.0):
        fitted = np.full(n, z_hat)
        above = draw_latents(fitted, np.ones(n, dtype=np.int64), rng)
        assert np.all(above > 0.0)
        analytic_up = z_hat + norm.pdf(z_hat) / norm.cdf(z_hat)
        rel_up = abs(above.mean() - analytic_up) / abs(analytic_up)

        below = draw_latents(fitted, np.zeros(n, dtype=np.int64), rng)
        assert np.all(below <= 0.0)
        analytic_down = z_hat - norm.pdf(z_hat) / norm.cdf(-z_hat)
        rel_down = abs(below.mean() - analytic_down) / abs(analytic_down)
        worst = max(worst, rel_up, rel_down)
    _line(8, "sign consistency 100%%, worst relative mean error %.3e "
          "(tolerance 1e-2)" % worst)
    assert worst < 0.01


# ---- criterion 9: conjugate posterior vs quadrature --------------------------

def _window(residuals, sig_mu):
    n = len(residuals)
    prec = n + sig_mu ** -2.0
    centre = float(np.sum(residuals)) / prec
    width = 14.0 / math.sqrt(prec)
    return centre - width, centre + width


def _quad_moments(residuals, sig_mu):
    def weight(mu):
        return float(np.prod(norm.pdf(residuals, loc=mu, scale=1.0))
                     * norm.pdf(mu, 0.0, sig_mu))

    lo, hi = _window(residuals, sig_mu)
    z, _ = quad(weight, lo, hi, limit=400, epsabs=0.0, epsrel=1e-12)
    m1, _ = quad(lambda mu: mu * weight(mu), lo, hi, limit=400,
                 epsabs=0.0, epsrel=1e-12)
    m2, _ = quad(lambda mu: mu * mu * weight(mu), lo, hi, limit=400,
                 epsabs=0.0, epsrel=1e-12)
    return m1 / z, m2 / z - (m1 / z) ** 2, math.log(z)


def test_criterion_09_conjugate_posterior_vs_quadrature():
    rng = np.random.default_rng(9)
    worst_moment, worst_logml = 0.0, 0.0
    for _ in range(20):
        n = int(rng.integers(1, 13))
        sig_mu = float(rng.uniform(0.05, 1.5))
        residuals = rng.normal(scale=1.5, size=n)
        mean_q, var_q, logml_q = _quad_moments(residuals, sig_mu)

        prec = n + sig_mu ** -2.0
        mean_c = float(np.sum(residuals)) / prec
        var_c = 1.0 / prec
        worst_moment = max(worst_moment, abs(mean_c - mean_q),
                           abs(var_c - var_q))

        logml_c = loglik_from_partition(
            np.zeros(n, dtype=np.int64), 1, residuals, sig_mu,
            include_constants=True,
        )
        worst_logml = max(worst_logml, abs(logml_c - logml_q))
    _line(9, "worst moment error %.3e, worst log-marginal error %.3e "
          "(tolerance 1e-6)" % (worst_moment, worst_logml))
    assert worst_moment < 1e-6
    assert worst_logml < 1e-6


# ---- criterion 10: move frequencies and reversibility -----------------------

def test_criterion_10_move_frequencies_and_antisymmetry():
    rng = np.random.default_rng(10)
    X = rng.normal(size=(40, 5))
    prior = TessellationPrior(
        PriorConfig(k=2.0, m=10, omega=2.0, lambda_c=3.0, sigma_c=0.3), X)
    tess = Tessellation([0, 2], rng.normal(size=(3, 2)))

    n = 100_000
    counts = np.zeros(6)
    for _ in range(n):
        counts[propose(tess, prior, rng).move] += 1
    worst_se = 0.0
    for kind, p in enumerate(MOVE_PROBABILITIES):
        se = math.sqrt(p * (1.0 - p) / n)
        worst_se = max(worst_se, abs(counts[kind] / n - p) / se)
        assert abs(counts[kind] / n - p) <= 3.0 * se, MoveKind(kind)

    def find_reverse(start, kind, target):
        for seed in range(500):
            prop = propose_move(start, kind, prior,
                                np.random.default_rng(10_000 + seed))
            if prop.is_noop or prop.candidate is None:
                continue
            if (np.array_equal(prop.candidate.dims, target.dims)
                    and np.array_equal(prop.candidate.centres, target.centres)):
                return prop
        raise AssertionError("no exact reverse found")

    pairs = 0
    for seed in range(12):
        fuzz = np.random.default_rng(200 + seed)
        base = Tessellation([0, 3], fuzz.normal(size=(2, 2)))
        fwd = propose_move(base, MoveKind.ADD_CENTRE, prior, fuzz)
        rev = find_reverse(fwd.candidate, MoveKind.REMOVE_CENTRE, base)
        assert fwd.log_proposal_ratio + rev.log_proposal_ratio == 0.0
        pairs += 1

        single = Tessellation([1], fuzz.normal(size=(2, 1)))
        fwd = propose_move(single, MoveKind.ADD_COVARIATE, prior, fuzz)
        rev = find_reverse(fwd.candidate, MoveKind.REMOVE_COVARIATE, single)
        assert fwd.log_proposal_ratio + rev.log_proposal_ratio == 0.0
        pairs += 1

        shift = propose_move(base, MoveKind.MOVE_CENTRE, prior, fuzz)
        assert shift.log_proposal_ratio == 0.0
        pairs += 1
    _line(10, "frequencies within %.2f standard errors (limit 3); "
          "%d reverse pairs antisymmetric exactly" % (worst_se, pairs))


# ---- criterion 11: prior recovery under zeroed likelihood --------------------

def test_criterion_11_prior_recovery():
    rng = np.random.default_rng(11)
    X = rng.normal(size=(40, 6))
    prior = TessellationPrior(
        PriorConfig(k=2.0, m=10, omega=2.0, lambda_c=3.0, sigma_c=0.3), X)
    chain_rng = np.random.default_rng(12)
    tess = Tessellation([0], X[:1, :1].copy())
    dims, centres = [], []
    thin = 25
    for step in range(60_000):
        tess = mh_step(tess, None, prior, chain_rng).tessellation
        if step % thin == thin - 1:
            dims.append(tess.n_dims)
            centres.append(tess.n_centres)
    dims, centres = np.array(dims), np.array(centres)

    def gof(samples, log_pmf, support):
        probs = np.array([math.exp(log_pmf(v)) for v in support])
        counts = np.array([(samples == v).sum() for v in support], dtype=float)
        counts = np.append(counts, (samples > support[-1]).sum())
        probs = np.append(probs, max(1.0 - probs.sum(), 0.0))
        expected = probs * samples.size
        keep = expected >= 5
        counts = np.append(counts[keep], counts[~keep].sum())
        expected = np.append(expected[keep], expected[~keep].sum())
        if counts[-1] == 0 and expected[-1] < 1e-9:
            counts, expected = counts[:-1], expected[:-1]
        expected *= counts.sum() / expected.sum()
        return chisquare(counts, expected).pvalue

    p_centres = gof(centres, prior.log_pmf_centre_count, np.arange(1, 12))
    p_dims = gof(dims, prior.log_pmf_dim_count, np.arange(1, 7))
    _line(11, "goodness-of-fit p-values: centre count %.4f, covariate count "
          "%.4f (floor 1e-3)" % (p_centres, p_dims))
    assert p_centres > 1e-3
    assert p_dims > 1e-3


# ---- criterion 12: AUC oracle ------------------------------------------------

def test_criterion_12_auc_oracles():
    def pairwise_auc(y, scores):
        pos = [s for s, t in zip(scores, y) if t == 1]
        neg = [s for s, t in zip(scores, y) if t == 0]
        total = 0.0
        for sp in pos:
            for sn in neg:
                if sp > sn:
                    total += 1.0
                elif sp == sn:
                    total += 0.5
        return total / (len(pos) * len(neg))

    rng = np.random.default_rng(12)
    worst_trap = 0.0
    for case in range(100):
        n = int(rng.integers(4, 40))
        y = rng.integers(0, 2, size=n)
        if y.min() == y.max():
            y[0] = 1 - y[0]
        if case % 2 == 0:
            scores = rng.integers(0, 5, size=n) / 5.0  # heavy ties
        else:
            scores = rng.permutation(n) / n
        got = roc_auc(y, scores)
        assert got == pairwise_auc(y, scores)
        trap = trapezoid_area(roc_curve(y, scores))
        worst_trap = max(worst_trap, abs(got - trap))
    _line(12, "rank AUC matched the pairwise oracle exactly on 100 cases; "
          "worst trapezoid gap %.2e (tolerance 1e-12)" % worst_trap)
    assert worst_trap < 1e-12


# ---- criterion 13: bit-identical reruns --------------------------------------

def test_criterion_13_bit_identical_reruns(tmp_path):
    rng = np.random.default_rng(13)
    X = rng.random((90, 2))
    y = (X[:, 1] > 0.5 * np.sin(10.0 * X[:, 0])).astype(np.int64)
    frame = make_frame(X, y, ("x1", "x2"), target="class")
    write_csv(frame, tmp_path / "train.csv")
    write_csv(frame.iloc[:30], tmp_path / "test.csv")

    fit = ["train", "--data", str(tmp_path / "train.csv"), "--target", "class",
           "--m", "10", "--burn-in", "50", "--draws", "50", "--seed", "13",
           "--no-figures"]
    assert cli.main(fit + ["--out", str(tmp_path / "a")]) == 0
    assert cli.main(fit + ["--out", str(tmp_path / "b")]) == 0
    model_a = (tmp_path / "a" / "model.vortess").read_bytes()
    model_b = (tmp_path / "b" / "model.vortess").read_bytes()
    assert model_a == model_b

    score = ["predict", "--model", str(tmp_path / "a" / "model.vortess"),
             "--data", str(tmp_path / "test.csv"), "--interval", "0.1",
             "--no-figures"]
    assert cli.main(score + ["--out", str(tmp_path / "pa")]) == 0
    assert cli.main(score + ["--out", str(tmp_path / "pb")]) == 0
    pred_a = (tmp_path / "pa" / "predictions.csv").read_bytes()
    assert pred_a == (tmp_path / "pb" / "predictions.csv").read_bytes()

    # threaded suite runs must agree with each other and with serial ones
    data_dir = tmp_path / "data"
    data_dir.mkdir()
    write_csv(frame, data_dir / "heart_failure.csv")
    frame2 = frame.rename(columns={"class": "DEATH_EVENT"})
    write_csv(frame2, data_dir / "heart_failure.csv")
    bench = ["benchmark", "--datasets", "heart_failure", "--splits", "2",
             "--data-dir", str(data_dir), "--seed", "13", "--m", "8",
             "--burn-in", "30", "--draws", "30", "--no-figures"]
    assert cli.main(bench + ["--threads", "1", "--out", str(tmp_path / "t1")]) == 0
    assert cli.main(bench + ["--threads", "2", "--out", str(tmp_path / "t2")]) == 0
    assert cli.main(bench + ["--threads", "2", "--out", str(tmp_path / "t3")]) == 0
    serial = (tmp_path / "t1" / "splits.csv").read_bytes()
    assert serial == (tmp_path / "t2" / "splits.csv").read_bytes()
    assert serial == (tmp_path / "t3" / "splits.csv").read_bytes()
    assert ((tmp_path / "t1" / "summary.csv").read_bytes()
            == (tmp_path / "t2" / "summary.csv").read_bytes())
    _line(13, "model, prediction, and threaded suite outputs byte-identical "
          "across reruns")
