"""Bayesian sum-of-Voronoi-tessellations binary classifier.

The model averages many small Voronoi partitions of the covariate
space, each contributing a per-cell offset to a latent probit score.
A Gibbs sampler with Metropolis-Hastings structure moves explores the
posterior; predictions are posterior mean class-1 probabilities with
equal-tailed uncertainty intervals.

Typical use::

    from vortess import SamplerConfig, run_gibbs, predict_proba

    draws = run_gibbs(X_train, y_train, SamplerConfig(seed=7), X_test=X_test)
    p_hat = predict_proba(draws)

The ``vortess`` console script exposes training, prediction,
evaluation, benchmark suites, synthetic sweeps, and inclusion reports.
"""

__version__ = "0.1.0"

from .exceptions import (
    ConfigError,
    DataError,
    InvalidTessellationError,
    NumericError,
    SchemaMismatchError,
    UndefinedMetricError,
    VortessError,
)
from .tessellation import Tessellation, assign_cell, cell_partition, ensemble_fit
from .priors import PriorConfig, TessellationPrior
from .moves import MoveKind, mh_step
from .sampler import (
    Diagnostics,
    PosteriorDraws,
    SamplerConfig,
    posterior_interval,
    posterior_prob_draws,
    predict_class,
    predict_proba,
    run_gibbs,
    variable_inclusion,
    variable_inclusion_grouped,
)
from .metrics import EvalReport, accuracy, roc_auc, roc_curve
from .synthetic import SyntheticSpec, generate_dataset
from .data import (
    Preprocessor,
    RawTable,
    kfold_indices,
    load_csv,
    preprocess,
    train_test_split,
)
from .modelfile import load_model, save_model
from .benchmark import DATASETS, SuiteConfig, run_suite

__all__ = [
    "__version__",
    "ConfigError",
    "DataError",
    "InvalidTessellationError",
    "NumericError",
    "SchemaMismatchError",
    "UndefinedMetricError",
    "VortessError",
    "Tessellation",
    "assign_cell",
    "cell_partition",
    "ensemble_fit",
    "PriorConfig",
    "TessellationPrior",
    "MoveKind",
    "mh_step",
    "Diagnostics",
    "PosteriorDraws",
    "SamplerConfig",
    "posterior_interval",
    "posterior_prob_draws",
    "predict_class",
    "predict_proba",
    "run_gibbs",
    "variable_inclusion",
    "variable_inclusion_grouped",
    "EvalReport",
    "accuracy",
    "roc_auc",
    "roc_curve",
    "SyntheticSpec",
    "generate_dataset",
    "Preprocessor",
    "RawTable",
    "kfold_indices",
    "load_csv",
    "preprocess",
    "train_test_split",
    "load_model",
    "save_model",
    "DATASETS",
    "SuiteConfig",
    "run_suite",
]
