"""Repeated-split benchmark harness over the bundled dataset registry.

Every (dataset, split) job is fully determined by the suite seed: the
split permutation, any cross-validation folds, and the sampler seed all
derive from one seed sequence keyed by the dataset's registry position,
so a dataset's numbers do not depend on which other datasets run
alongside it or on how jobs are scheduled across workers. Rows are
emitted in canonical (dataset, split) order either way.

Dataset files are plain CSVs looked up in a data directory (argument,
VORTESS_DATA_DIR, or ./data). scripts/fetch_benchmark_data.py
downloads and normalises the public ones; reference accuracy/AUC
figures are carried as context columns for the summary table.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path

import numpy as np

from .data import drop_missing_rows, kfold_indices, load_csv, preprocess, train_test_split
from .exceptions import ConfigError, DataError
from .metrics import EvalReport
from .sampler import SamplerConfig, predict_proba, run_gibbs

__all__ = [
    "DatasetSpec",
    "DATASETS",
    "SuiteConfig",
    "SplitResult",
    "BenchmarkResult",
    "resolve_data_dir",
    "run_suite",
]


@dataclass(frozen=True)
class DatasetSpec:
    """Registry entry: file name, schema hints, and reference scores."""

    name: str
    filename: str
    schema: dict = field(hash=False)
    reference_accuracy: float | None = None
    reference_auc: float | None = None


DATASETS = {
    spec.name: spec
    for spec in (
        DatasetSpec("breast_cancer", "breast_cancer.csv",
                    {"target": "class", "positive": "malignant"}, 97.2, 0.994),
        DatasetSpec("sonar", "sonar.csv",
                    {"target": "class", "positive": "M"}, 86.4, 0.952),
        DatasetSpec("heart_failure", "heart_failure.csv",
                    {"target": "DEATH_EVENT"}, 85.8, 0.918),
        DatasetSpec("german_credit", "german_credit.csv",
                    {"target": "risk", "positive": 2}, 76.4, 0.793),
        DatasetSpec("ionosphere", "ionosphere.csv",
                    {"target": "class", "positive": "g"}, 93.7, 0.980),
        DatasetSpec("digital_sensors", "digital_sensors.csv",
                    {"target": "target"}, 99.7, 1.000),
    )
}

# Fixed position of each dataset in the seed derivation, independent of
# which subset a particular suite happens to run.
_REGISTRY_ORDER = {name: i for i, name in enumerate(sorted(DATASETS))}

DEFAULT_CV_GRID = {
    "sigma_c": (0.2, 0.4),
    "omega": (3.0, 5.0),
    "lambda_c": (15.0, 30.0, 45.0),
}

# Salts separating the independent random streams of one (dataset, split).
_SALT_SPLIT = 0
_SALT_FOLDS = 1
_SALT_CV_FIT = 2
_SALT_FINAL_FIT = 3


def resolve_data_dir(explicit=None) -> Path:
    if explicit is not None:
        return Path(explicit)
    env = os.environ.get("VORTESS_DATA_DIR")
    return Path(env) if env else Path("data")


@dataclass(frozen=True)
class SuiteConfig:
    """One benchmark run: which datasets, how many splits, what sampler."""

    datasets: tuple
    splits: int = 20
    fraction: float = 0.8
    seed: int = 0
    sampler: SamplerConfig = SamplerConfig()
    cv: bool = False
    cv_grid: tuple = tuple(sorted(DEFAULT_CV_GRID.items()))
    cv_folds: int = 5
    threads: int = 1

    def __post_init__(self):
        if not self.datasets:
            raise ConfigError("suite needs at least one dataset")
        unknown = [d for d in self.datasets if d not in DATASETS]
        if unknown:
            raise ConfigError(
                "unknown dataset(s): %s (known: %s)"
                % (", ".join(unknown), ", ".join(sorted(DATASETS)))
            )
        if self.splits < 1:
            raise ConfigError("splits must be >= 1")
        if not 0.0 < self.fraction < 1.0:
            raise ConfigError("fraction must lie in (0, 1)")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        if self.cv_folds < 2:
            raise ConfigError("cv_folds must be >= 2")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        tunable = ("sigma_c", "omega", "lambda_c", "m", "k")
        for key, values in self.cv_grid:
            if key not in tunable:
                raise ConfigError("cv_grid cannot tune %r" % (key,))
            if not values:
                raise ConfigError("cv_grid entry %r has no values" % (key,))


@dataclass
class SplitResult:
    dataset: str
    split: int
    seed: int
    n_train: int
    n_test: int
    n_features: int
    accuracy: float
    auc: float
    sigma_c: float
    omega: float
    lambda_c: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class BenchmarkResult:
    rows: list
    summary: list
    failures: dict

    @property
    def ok(self) -> bool:
        return not self.failures


def _derived_seed(*path) -> int:
    return int(np.random.SeedSequence(list(path)).generate_state(1, dtype=np.uint64)[0])


def _grid_combos(cv_grid) -> list:
    keys = [k for k, _ in cv_grid]
    values = [v for _, v in cv_grid]
    return [dict(zip(keys, combo)) for combo in product(*values)]


def _fit_score(train_table, test_table, config: SamplerConfig):
    X_train, y_train, prep = preprocess(train_table)
    X_test, y_test = prep.transform(test_table)
    if y_test is None:
        raise DataError("test rows lost their labels during preprocessing")
    draws = run_gibbs(X_train, y_train, config, X_test=X_test)
    report = EvalReport.from_scores(y_test, predict_proba(draws), config.threshold)
    return report, X_train.shape[1]


def _select_by_cv(train_table, suite: SuiteConfig, dataset_index: int, split: int):
    """Pick the grid combo with the best mean fold accuracy (ties: first)."""
    combos = _grid_combos(suite.cv_grid)
    fold_seed = _derived_seed(suite.seed, dataset_index, split, _SALT_FOLDS)
    folds = kfold_indices(train_table.n_rows, suite.cv_folds, fold_seed)
    all_rows = np.arange(train_table.n_rows)
    best_combo, best_score = None, -np.inf
    for c_idx, combo in enumerate(combos):
        scores = []
        for f_idx, fold in enumerate(folds):
            fit_rows = np.setdiff1d(all_rows, fold)
            config = replace(
                suite.sampler,
                seed=_derived_seed(
                    suite.seed, dataset_index, split, _SALT_CV_FIT, c_idx, f_idx
                ),
                **combo,
            )
            report, _ = _fit_score(
                train_table.select(fit_rows), train_table.select(fold), config
            )
            scores.append(report.accuracy)
        mean_score = float(np.mean(scores))
        if mean_score > best_score:
            best_combo, best_score = combo, mean_score
    return best_combo


def _run_job(suite: SuiteConfig, name: str, path: Path, split: int) -> SplitResult:
    spec = DATASETS[name]
    dataset_index = _REGISTRY_ORDER[name]
    table = load_csv(path, spec.schema)
    table, _ = drop_missing_rows(table)
    split_seed = _derived_seed(suite.seed, dataset_index, split, _SALT_SPLIT)
    train_table, test_table = train_test_split(table, suite.fraction, split_seed)
    combo = {}
    if suite.cv:
        combo = _select_by_cv(train_table, suite, dataset_index, split)
    config = replace(
        suite.sampler,
        seed=_derived_seed(suite.seed, dataset_index, split, _SALT_FINAL_FIT),
        **combo,
    )
    report, n_features = _fit_score(train_table, test_table, config)
    return SplitResult(
        dataset=name,
        split=split,
        seed=config.seed,
        n_train=train_table.n_rows,
        n_test=test_table.n_rows,
        n_features=n_features,
        accuracy=report.accuracy,
        auc=report.auc,
        sigma_c=config.sigma_c,
        omega=config.omega,
        lambda_c=config.lambda_c,
    )


def _run_job_safe(job):
    suite, name, path, split = job
    try:
        return _run_job(suite, name, path, split)
    except Exception as exc:  # isolated per dataset, reported in failures
        return (name, split, "%s: %s" % (type(exc).__name__, exc))


def run_suite(suite: SuiteConfig, data_dir=None) -> BenchmarkResult:
    """Run every (dataset, split) job and aggregate per-dataset summaries.

    A dataset whose file is missing or whose jobs raise is recorded
    under ``failures``; the rest of the suite still runs. Successful
    splits of a failed dataset stay in ``rows`` but the dataset is
    left out of ``summary``.
    """
    data_dir = resolve_data_dir(data_dir)
    names = sorted(set(suite.datasets))
    failures: dict = {}
    jobs = []
    for name in names:
        path = data_dir / DATASETS[name].filename
        if not path.is_file():
            failures[name] = "dataset file not found: %s" % path
            continue
        for split in range(suite.splits):
            jobs.append((suite, name, path, split))

    if suite.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=suite.threads) as pool:
            outcomes = list(pool.map(_run_job_safe, jobs, chunksize=1))
    else:
        outcomes = [_run_job_safe(job) for job in jobs]

    rows: list = []
    by_dataset: dict = {}
    for outcome in outcomes:
        if isinstance(outcome, SplitResult):
            rows.append(outcome)
            by_dataset.setdefault(outcome.dataset, []).append(outcome)
        else:
            name, split, message = outcome
            failures.setdefault(name, "split %d: %s" % (split, message))

    summary = []
    for name in names:
        split_rows = by_dataset.get(name, [])
        if name in failures or not split_rows:
            continue
        accs = np.array([r.accuracy for r in split_rows])
        aucs = np.array([r.auc for r in split_rows])
        spec = DATASETS[name]
        summary.append({
            "dataset": name,
            "n_rows": split_rows[0].n_train + split_rows[0].n_test,
            "n_features": split_rows[0].n_features,
            "splits": len(split_rows),
            "mean_accuracy": float(accs.mean()),
            "sd_accuracy": float(accs.std(ddof=1)) if len(split_rows) > 1 else 0.0,
            "mean_auc": float(aucs.mean()),
            "sd_auc": float(aucs.std(ddof=1)) if len(split_rows) > 1 else 0.0,
            "reference_accuracy": spec.reference_accuracy,
            "reference_auc": spec.reference_auc,
        })
    return BenchmarkResult(rows=rows, summary=summary, failures=failures)
