"""Gibbs backfitting sampler and posterior predictive inference.

Each sweep redraws the probit latents around the current ensemble fit,
then visits every tessellation in turn: the structure moves by one
Metropolis-Hastings step against the collapsed likelihood of its
partial residuals, and the cell outputs are redrawn from their
conjugate normal conditional. The running fit (and, when a test matrix
is supplied, the running test fit) is adjusted incrementally as members
change, with an optional periodic from-scratch recomputation guarding
against drift.

Retained snapshots are plain ``(Tessellation, outputs)`` pair tuples,
so prediction on new rows needs nothing beyond the tessellation
geometry. Probabilities are posterior means of Phi(G(x) + c) across
snapshots, where the offset c = Phi^-1(p0) centres the prior class
probability at p0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import ndtr, ndtri

from .exceptions import ConfigError, NumericError, SchemaMismatchError
from .latent import draw_latents
from .moves import MOVE_PROBABILITIES, MoveKind, mh_step
from .priors import PriorConfig, TessellationPrior, draw_outputs_from_partition
from .tessellation import Tessellation, cell_partition, ensemble_fit

__all__ = [
    "SamplerConfig",
    "Diagnostics",
    "PosteriorDraws",
    "run_gibbs",
    "posterior_scores",
    "posterior_prob_draws",
    "predict_proba",
    "predict_class",
    "posterior_interval",
    "variable_inclusion",
]

_N_MOVES = len(MOVE_PROBABILITIES)


@dataclass(frozen=True)
class SamplerConfig:
    """Everything a training run needs besides the data.

    m : ensemble size
    k : output shrinkage factor, prior scale sigma_mu = 3 / (k sqrt(m))
    omega, lambda_c, sigma_c : structure-prior parameters
    burn_in : discarded warm-up sweeps
    draws : retained posterior snapshots K
    thin : keep every thin-th post-burn-in sweep
    seed : 64-bit RNG seed
    threshold : classification cutoff on the posterior probability
    p0 : prior-centred class-1 probability; offset c = Phi^-1(p0)
    debug_every : sweeps between from-scratch fit recomputations
        (0 disables the check)
    """

    m: int = 200
    k: float = 3.0
    omega: float = 3.0
    lambda_c: float = 25.0
    sigma_c: float = 0.2
    burn_in: int = 1000
    draws: int = 1000
    thin: int = 1
    seed: int = 0
    threshold: float = 0.5
    p0: float = 0.5
    debug_every: int = 200

    def __post_init__(self):
        self.prior_config()  # validates m, k, omega, lambda_c, sigma_c
        for name, low in (("burn_in", 0), ("draws", 1), ("thin", 1), ("debug_every", 0)):
            value = getattr(self, name)
            if not (isinstance(value, (int, np.integer)) and value >= low):
                raise ConfigError("%s must be an integer >= %d" % (name, low))
        for name in ("threshold", "p0"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ConfigError("%s must lie strictly inside (0, 1)" % name)
        if not isinstance(self.seed, (int, np.integer)):
            raise ConfigError("seed must be an integer")

    def prior_config(self) -> PriorConfig:
        return PriorConfig(
            k=self.k, m=self.m, omega=self.omega,
            lambda_c=self.lambda_c, sigma_c=self.sigma_c,
        )

    @property
    def offset(self) -> float:
        return float(ndtri(self.p0))

    @property
    def total_sweeps(self) -> int:
        return self.burn_in + self.draws * self.thin

    def to_dict(self) -> dict:
        return {key: (value.item() if isinstance(value, np.generic) else value)
                for key, value in asdict(self).items()}

    @classmethod
    def from_dict(cls, data: dict) -> "SamplerConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ConfigError("unknown sampler options: %s" % ", ".join(sorted(extra)))
        return cls(**data)


@dataclass
class Diagnostics:
    """Per-sweep chain traces.

    ``proposed``/``accepted`` count moves by kind per sweep, shape
    (sweeps, 6) in ``MoveKind`` order; NoOps count as rejected proposals
    of their kind. ``dim_counts``/``centre_counts`` record every
    member's size per sweep, shape (sweeps, m).
    """

    proposed: np.ndarray
    accepted: np.ndarray
    dim_counts: np.ndarray
    centre_counts: np.ndarray

    def acceptance_rates(self) -> np.ndarray:
        """Accepted / proposed per move kind over the whole run."""
        prop = self.proposed.sum(axis=0).astype(np.float64)
        acc = self.accepted.sum(axis=0).astype(np.float64)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(prop > 0, acc / prop, np.nan)

    def summary_lines(self) -> list[str]:
        rates = self.acceptance_rates()
        lines = []
        for kind in MoveKind:
            prop = int(self.proposed[:, kind].sum())
            acc = int(self.accepted[:, kind].sum())
            rate = "   n/a" if math.isnan(rates[kind]) else "%6.3f" % rates[kind]
            lines.append("%-16s proposed %8d  accepted %8d  rate %s"
                         % (kind.name, prop, acc, rate))
        lines.append("mean dims per member    %.2f" % self.dim_counts.mean())
        lines.append("mean centres per member %.2f" % self.centre_counts.mean())
        return lines


@dataclass
class PosteriorDraws:
    """K retained ensemble snapshots plus run metadata.

    ``snapshots[k]`` is a tuple of (Tessellation, outputs) pairs.
    ``test_scores`` caches G on the test matrix passed to ``run_gibbs``,
    one row per snapshot, so test-set inference skips re-evaluation.
    """

    snapshots: tuple
    n_features: int
    config: SamplerConfig
    diagnostics: Diagnostics | None = None
    test_scores: np.ndarray | None = field(default=None, repr=False)

    @property
    def n_draws(self) -> int:
        return len(self.snapshots)

    @property
    def offset(self) -> float:
        return self.config.offset


def _as_matrix(X, n_features: int | None = None) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("expected a 2-D covariate matrix, got shape %r" % (X.shape,))
    if not np.all(np.isfinite(X)):
        raise ValueError("covariate matrix must be finite")
    if n_features is not None and X.shape[1] != n_features:
        raise SchemaMismatchError(
            "matrix has %d columns but the model was trained on %d"
            % (X.shape[1], n_features)
        )
    return X


def run_gibbs(X, y, config: SamplerConfig | None = None,
              X_test=None) -> PosteriorDraws:
    """Run the full backfitting chain and return retained snapshots.

    Parameters
    ----------
    X : (n, p) standardized training covariates
    y : (n,) binary responses in {0, 1}
    config : SamplerConfig, defaults used when omitted
    X_test : optional (n_test, p) matrix whose per-snapshot ensemble
        sums are cached on the result as ``test_scores``

    The chain runs ``burn_in + draws * thin`` sweeps and keeps every
    ``thin``-th post-burn-in state. Identical inputs and seed give an
    identical result, including the cached test scores.
    """
    if config is None:
        config = SamplerConfig()
    X = _as_matrix(X)
    n, p = X.shape
    y = np.asarray(y)
    if y.shape != (n,):
        raise ValueError("y must have shape (%d,), got %r" % (n, y.shape))
    if not np.all(np.isin(y, (0, 1))):
        raise ValueError("y must contain only 0 and 1")
    y = y.astype(np.int8)
    if y.min() == y.max():
        warnings.warn(
            "responses are all %d; the fit degenerates to an intercept" % int(y[0]),
            RuntimeWarning,
        )
    if X_test is not None:
        X_test = _as_matrix(X_test, n_features=p)

    rng = np.random.default_rng(config.seed)
    prior = TessellationPrior(config.prior_config(), X)
    sig_mu = prior.sigma_mu
    offset = config.offset
    m = config.m

    # one covariate, one centre at a training point, zero output
    members: list[Tessellation] = []
    for _ in range(m):
        dim = int(rng.integers(p))
        row = int(rng.integers(n))
        members.append(Tessellation([dim], [[X[row, dim]]]))
    mus = [np.zeros(1) for _ in range(m)]
    assigns = [cell_partition(X, t) for t in members]
    if X_test is not None:
        test_assigns = [cell_partition(X_test, t) for t in members]
        fit_test = np.zeros(X_test.shape[0])
    fit = np.zeros(n)

    total = config.total_sweeps
    proposed = np.zeros((total, _N_MOVES), dtype=np.int64)
    accepted = np.zeros((total, _N_MOVES), dtype=np.int64)
    dim_counts = np.zeros((total, m), dtype=np.int16)
    centre_counts = np.zeros((total, m), dtype=np.int16)
    snapshots = []
    test_scores = [] if X_test is not None else None

    for sweep in range(total):
        try:
            z = draw_latents(fit, y, rng, offset)
            target = z - offset
            for j in range(m):
                g_old = mus[j][assigns[j]]
                residuals = target - fit + g_old
                result = mh_step(members[j], residuals, prior, rng, assigns[j])
                proposed[sweep, result.move] += 1
                if result.accepted:
                    accepted[sweep, result.move] += 1
                if X_test is not None:
                    g_test_old = mus[j][test_assigns[j]]
                    if result.accepted:
                        test_assigns[j] = cell_partition(X_test, result.tessellation)
                members[j] = result.tessellation
                assigns[j] = result.assignments
                mus[j] = draw_outputs_from_partition(
                    assigns[j], members[j].n_centres, residuals, sig_mu, rng
                )
                fit += mus[j][assigns[j]] - g_old
                if X_test is not None:
                    fit_test += mus[j][test_assigns[j]] - g_test_old
        except NumericError as exc:
            raise NumericError("sweep %d: %s" % (sweep, exc)) from exc
        if not np.all(np.isfinite(fit)):
            raise NumericError("non-finite running fit at sweep %d" % sweep)

        for j in range(m):
            dim_counts[sweep, j] = members[j].n_dims
            centre_counts[sweep, j] = members[j].n_centres

        if config.debug_every and (sweep + 1) % config.debug_every == 0:
            fresh = ensemble_fit(X, list(zip(members, mus)))
            drift = float(np.max(np.abs(fit - fresh)))
            if drift > 1e-8:
                raise NumericError(
                    "incremental fit drifted %.3e from recomputation at sweep %d"
                    % (drift, sweep)
                )

        if sweep >= config.burn_in and (sweep - config.burn_in) % config.thin == 0:
            snapshots.append(tuple(zip(members, mus)))
            if X_test is not None:
                test_scores.append(fit_test.copy())

    return PosteriorDraws(
        snapshots=tuple(snapshots),
        n_features=p,
        config=config,
        diagnostics=Diagnostics(proposed, accepted, dim_counts, centre_counts),
        test_scores=None if test_scores is None else np.asarray(test_scores),
    )


# ---- posterior predictive ---------------------------------------------------


def posterior_scores(draws: PosteriorDraws, X) -> np.ndarray:
    """Ensemble sum G(x) per snapshot and row, shape (K, n).

    Tessellations shared between consecutive snapshots (structure moves
    that were rejected) are partitioned once and reused.
    """
    X = _as_matrix(X, n_features=draws.n_features)
    if not draws.snapshots:
        raise ValueError("posterior draws are empty")
    scores = np.empty((draws.n_draws, X.shape[0]))
    cache: dict[int, np.ndarray] = {}
    for k, snapshot in enumerate(draws.snapshots):
        total = np.zeros(X.shape[0])
        for tess, outputs in snapshot:
            cells = cache.get(id(tess))
            if cells is None:
                cells = cell_partition(X, tess)
                cache[id(tess)] = cells
            total += outputs[cells]
        scores[k] = total
    return scores


def _scores_for(draws: PosteriorDraws, X) -> np.ndarray:
    if X is None:
        if draws.test_scores is None:
            raise ValueError(
                "no covariate matrix given and the draws carry no cached test scores"
            )
        return draws.test_scores
    return posterior_scores(draws, X)


def posterior_prob_draws(draws: PosteriorDraws, X=None) -> np.ndarray:
    """Per-snapshot class-1 probabilities Phi(G + c), shape (K, n).

    With ``X=None`` the scores cached at training time are used.
    """
    return ndtr(_scores_for(draws, X) + draws.offset)


def predict_proba(draws: PosteriorDraws, X=None):
    """Posterior mean class-1 probability per row.

    Accepts a single row (1-D) and returns a float, or a matrix and
    returns a vector.
    """
    single = X is not None and np.asarray(X).ndim == 1
    if single:
        X = np.asarray(X, dtype=np.float64)[None, :]
    probs = posterior_prob_draws(draws, X).mean(axis=0)
    return float(probs[0]) if single else probs


def predict_class(p, threshold: float = 0.5):
    """1 where the probability strictly exceeds the threshold, else 0."""
    p = np.asarray(p)
    labels = (p > threshold).astype(np.int64)
    return int(labels) if labels.ndim == 0 else labels


def posterior_interval(draws: PosteriorDraws, X=None, alpha: float = 0.1):
    """Pointwise (alpha/2, 1 - alpha/2) quantiles of the probability draws.

    Quantiles are taken over the K snapshots with the inverted-CDF rule,
    so every bound is an actually sampled probability.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly inside (0, 1)")
    single = X is not None and np.asarray(X).ndim == 1
    if single:
        X = np.asarray(X, dtype=np.float64)[None, :]
    probs = posterior_prob_draws(draws, X)
    lo = np.quantile(probs, alpha / 2.0, axis=0, method="inverted_cdf")
    hi = np.quantile(probs, 1.0 - alpha / 2.0, axis=0, method="inverted_cdf")
    if single:
        return float(lo[0]), float(hi[0])
    return lo, hi


def variable_inclusion(draws: PosteriorDraws) -> np.ndarray:
    """Percentage of (snapshot, member) pairs using each covariate."""
    if not draws.snapshots:
        raise ValueError("posterior draws are empty")
    counts = np.zeros(draws.n_features)
    pairs = 0
    for snapshot in draws.snapshots:
        for tess, _ in snapshot:
            counts[tess.dims] += 1.0
            pairs += 1
    return 100.0 * counts / pairs


def variable_inclusion_grouped(draws: PosteriorDraws, groups: dict) -> dict:
    """Inclusion percentages with covariate groups counted once per pair.

    ``groups`` maps a display name to the covariate indices that encode
    it (an indicator set from one categorical column, say); a pair
    counts as using the group when its dims contain any member index.
    """
    if not draws.snapshots:
        raise ValueError("posterior draws are empty")
    names = list(groups)
    counts = dict.fromkeys(names, 0)
    pairs = 0
    for snapshot in draws.snapshots:
        for tess, _ in snapshot:
            pairs += 1
            used = set(tess.dims.tolist())
            for name in names:
                if used.intersection(groups[name]):
                    counts[name] += 1
    return {name: 100.0 * counts[name] / pairs for name in names}
