"""Structure prior, output-scale prior, and the collapsed likelihood.

Cell outputs carry independent N(0, sigma_mu^2) priors with
sigma_mu = 3 / (k * sqrt(m)), so the prior spread of an m-member
ensemble sum stays fixed while k tunes the shrinkage. The noise scale
is fixed at 1 (the probit latent scale).

The tessellation structure prior factorises into four parts:

* dimension count  d ~ Poisson(omega) restricted to {1, ..., p}
* centre count     b ~ Poisson(lambda_c) restricted to {1, 2, ...}
* covariate identity: uniform over the C(p, d) subsets of size d
* centre coordinates: independent per centre and per dimension, each
  following the Gaussian-kernel smoothed empirical distribution of the
  matching training column (bandwidth sigma_c)

The coordinate factor depends on the training matrix, so the prior
object binds the data it was built from. All arithmetic stays in the
log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .exceptions import ConfigError, InvalidTessellationError, NumericError
from .tessellation import Tessellation, cell_partition

__all__ = [
    "PriorConfig",
    "sigma_mu",
    "TessellationPrior",
    "log_marginal_likelihood",
    "loglik_from_partition",
    "draw_cell_outputs",
    "draw_outputs_from_partition",
]

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def sigma_mu(k: float, m: int) -> float:
    """Prior standard deviation of a single cell output, 3 / (k * sqrt(m))."""
    if not k > 0:
        raise ConfigError("k must be positive, got %r" % (k,))
    if not (isinstance(m, (int, np.integer)) and m >= 1):
        raise ConfigError("m must be a positive integer, got %r" % (m,))
    return 3.0 / (k * math.sqrt(m))


@dataclass(frozen=True)
class PriorConfig:
    """Hyperparameters shared by the prior and the sampler.

    k : output shrinkage factor (larger k, stronger shrinkage)
    m : ensemble size
    omega : rate of the truncated Poisson over dimension counts
    lambda_c : rate of the truncated Poisson over centre counts
    sigma_c : kernel bandwidth for coordinate densities, also the
        proposal noise scale for centre placement
    """

    k: float = 3.0
    m: int = 200
    omega: float = 3.0
    lambda_c: float = 25.0
    sigma_c: float = 0.2

    def __post_init__(self):
        if not self.k > 0:
            raise ConfigError("k must be positive")
        if not (isinstance(self.m, (int, np.integer)) and self.m >= 1):
            raise ConfigError("m must be a positive integer")
        for name in ("omega", "lambda_c", "sigma_c"):
            if not getattr(self, name) > 0:
                raise ConfigError("%s must be positive" % name)

    @property
    def sigma_mu(self) -> float:
        return sigma_mu(self.k, self.m)


class TessellationPrior:
    """Structure prior bound to a standardised training matrix."""

    def __init__(self, config: PriorConfig, X: np.ndarray):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ConfigError("training matrix must be 2-D and non-empty")
        if not np.all(np.isfinite(X)):
            raise ConfigError("training matrix must be finite")
        self.config = config
        self.X = X
        self.n, self.p = X.shape
        # normaliser of the dimension-count pmf: sum_{t=1..p} omega^t / t!
        t = np.arange(1, self.p + 1)
        self._log_norm_dims = logsumexp(t * math.log(config.omega) - gammaln(t + 1))
        # normaliser of the centre-count pmf: e^lambda - 1, in log form
        lam = config.lambda_c
        self._log_norm_centres = lam + math.log1p(-math.exp(-lam))

    @property
    def sigma_mu(self) -> float:
        return self.config.sigma_mu

    # ---- count factors ----------------------------------------------------

    def log_pmf_dim_count(self, d: int) -> float:
        """log P(d dims), Poisson(omega) restricted to 1..p."""
        if d < 1 or d > self.p:
            return -np.inf
        return d * math.log(self.config.omega) - float(gammaln(d + 1)) - self._log_norm_dims

    def log_pmf_centre_count(self, b: int) -> float:
        """log P(b centres), Poisson(lambda_c) restricted to b >= 1."""
        if b < 1:
            return -np.inf
        return (
            b * math.log(self.config.lambda_c)
            - float(gammaln(b + 1))
            - self._log_norm_centres
        )

    def log_subset_choice(self, d: int) -> float:
        """log of the uniform probability of one size-d covariate subset."""
        return -float(
            gammaln(self.p + 1) - gammaln(d + 1) - gammaln(self.p - d + 1)
        )

    # ---- coordinate factor ------------------------------------------------

    def log_coordinate_density(self, dim: int, values) -> float:
        """Sum of log kernel densities of ``values`` against column ``dim``."""
        values = np.atleast_1d(np.asarray(values, dtype=np.float64))
        col = self.X[:, dim]
        s = self.config.sigma_c
        z = (values[:, None] - col[None, :]) / s
        logs = logsumexp(-0.5 * z * z, axis=1)
        per_value = logs - math.log(self.n) - math.log(s) - _LOG_SQRT_2PI
        return float(per_value.sum())

    def log_centre_coordinate_density(self, dims: np.ndarray, centre: np.ndarray) -> float:
        """Coordinate factor of a single centre across its dimensions."""
        return float(
            sum(
                self.log_coordinate_density(int(dim), centre[j])
                for j, dim in enumerate(dims)
            )
        )

    def log_centre_birth_density(self, dims: np.ndarray, centre: np.ndarray) -> float:
        """Density of the centre-placement proposal at ``centre``.

        The proposal picks one training row uniformly and jitters every
        coordinate with N(0, sigma_c^2), so the density is a joint
        mixture over rows (not the product of per-dimension kernels).
        """
        centre = np.asarray(centre, dtype=np.float64)
        s = self.config.sigma_c
        z = (centre[None, :] - self.X[:, dims]) / s
        log_rows = np.sum(-0.5 * z * z, axis=1)
        return float(
            logsumexp(log_rows)
            - math.log(self.n)
            - dims.size * (math.log(s) + _LOG_SQRT_2PI)
        )

    # ---- full prior and per-move deltas ------------------------------------

    def log_prior(self, tess: Tessellation) -> float:
        """Full log prior density of a tessellation (all four factors)."""
        d = tess.n_dims
        if d > self.p or int(tess.dims[-1]) >= self.p:
            raise InvalidTessellationError(
                "tessellation uses covariates outside the training matrix"
            )
        total = (
            self.log_pmf_dim_count(d)
            + self.log_pmf_centre_count(tess.n_centres)
            + self.log_subset_choice(d)
        )
        for j, dim in enumerate(tess.dims):
            total += self.log_coordinate_density(int(dim), tess.centres[:, j])
        return float(total)

    def log_prior_delta(self, tess: Tessellation, proposal) -> float:
        """log prior(candidate) - log prior(current) without full re-evaluation.

        ``proposal`` carries the per-move change record (see moves). Only
        the factors touched by the move are recomputed; equality with the
        difference of full ``log_prior`` calls is covered by tests.
        """
        from .moves import MoveKind  # local import to avoid a cycle

        b = tess.n_centres
        d = tess.n_dims
        kind = proposal.move
        if kind == MoveKind.ADD_CENTRE:
            return (
                self.log_pmf_centre_count(b + 1)
                - self.log_pmf_centre_count(b)
                + self.log_centre_coordinate_density(tess.dims, proposal.new_coords)
            )
        if kind == MoveKind.REMOVE_CENTRE:
            return (
                self.log_pmf_centre_count(b - 1)
                - self.log_pmf_centre_count(b)
                - self.log_centre_coordinate_density(tess.dims, proposal.old_coords)
            )
        if kind == MoveKind.MOVE_CENTRE:
            return self.log_centre_coordinate_density(
                tess.dims, proposal.new_coords
            ) - self.log_centre_coordinate_density(tess.dims, proposal.old_coords)
        if kind == MoveKind.ADD_COVARIATE:
            return (
                self.log_pmf_dim_count(d + 1)
                - self.log_pmf_dim_count(d)
                + self.log_subset_choice(d + 1)
                - self.log_subset_choice(d)
                + self.log_coordinate_density(proposal.dim, proposal.new_coords)
            )
        if kind == MoveKind.REMOVE_COVARIATE:
            return (
                self.log_pmf_dim_count(d - 1)
                - self.log_pmf_dim_count(d)
                + self.log_subset_choice(d - 1)
                - self.log_subset_choice(d)
                - self.log_coordinate_density(proposal.removed_dim, proposal.old_coords)
            )
        if kind == MoveKind.SWAP_COVARIATE:
            return self.log_coordinate_density(
                proposal.dim, proposal.new_coords
            ) - self.log_coordinate_density(proposal.removed_dim, proposal.old_coords)
        raise ValueError("unknown move kind %r" % (kind,))

    # ---- sampling from the prior -------------------------------------------

    def sample(self, rng: np.random.Generator) -> Tessellation:
        """Draw a tessellation from the structure prior."""
        while True:
            d = int(rng.poisson(self.config.omega))
            if 1 <= d <= self.p:
                break
        while True:
            b = int(rng.poisson(self.config.lambda_c))
            if b >= 1:
                break
        dims = np.sort(rng.choice(self.p, size=d, replace=False))
        for _ in range(100):
            centres = np.empty((b, d))
            for j, dim in enumerate(dims):
                rows = rng.integers(self.n, size=b)
                centres[:, j] = self.X[rows, dim] + self.config.sigma_c * rng.standard_normal(b)
            if np.unique(centres, axis=0).shape[0] == b:
                return Tessellation(dims, centres)
        raise NumericError("could not draw distinct centres from the prior")


# ---- collapsed likelihood and conjugate output draws -----------------------


def _cell_stats(assignments: np.ndarray, n_cells: int, residuals: np.ndarray):
    counts = np.bincount(assignments, minlength=n_cells).astype(np.float64)
    sums = np.bincount(assignments, weights=residuals, minlength=n_cells)
    return counts, sums


def loglik_from_partition(assignments: np.ndarray, n_cells: int,
                          residuals: np.ndarray, sigma_mu: float,
                          include_constants: bool = False) -> float:
    """Log marginal likelihood of residuals given a fixed partition.

    With outputs integrated out, each cell i with n_i rows and residual
    sum S_i contributes

        -0.5 * log(1 + n_i * sigma_mu^2)
        + sigma_mu^2 * S_i^2 / (2 * (1 + n_i * sigma_mu^2)).

    ``include_constants`` adds the partition-independent Gaussian terms
    -(n/2) log(2 pi) - 0.5 * sum(residuals^2); leaving them out is safe
    whenever only differences between partitions matter.
    """
    residuals = np.asarray(residuals, dtype=np.float64)
    if not np.all(np.isfinite(residuals)):
        raise NumericError("residuals must be finite")
    s2 = sigma_mu * sigma_mu
    counts, sums = _cell_stats(assignments, n_cells, residuals)
    denom = 1.0 + counts * s2
    total = float(np.sum(-0.5 * np.log(denom) + s2 * sums * sums / (2.0 * denom)))
    if include_constants:
        total += float(
            -0.5 * residuals.size * math.log(2.0 * math.pi)
            - 0.5 * np.dot(residuals, residuals)
        )
    return total


def log_marginal_likelihood(tess: Tessellation, residuals: np.ndarray, X: np.ndarray,
                            sigma_mu: float, include_constants: bool = False) -> float:
    """Collapsed log likelihood of a tessellation on residuals over ``X``."""
    assignments = cell_partition(X, tess)
    return loglik_from_partition(
        assignments, tess.n_centres, residuals, sigma_mu, include_constants
    )


def draw_outputs_from_partition(assignments: np.ndarray, n_cells: int,
                                residuals: np.ndarray, sigma_mu: float,
                                rng: np.random.Generator) -> np.ndarray:
    """Conjugate draw of all cell outputs given a fixed partition.

    Cell i gets N(S_i / (n_i + sigma_mu^-2), 1 / (n_i + sigma_mu^-2));
    empty cells fall back to the N(0, sigma_mu^2) prior, which is the
    same formula with n_i = S_i = 0.
    """
    residuals = np.asarray(residuals, dtype=np.float64)
    counts, sums = _cell_stats(assignments, n_cells, residuals)
    prec = counts + sigma_mu ** -2.0
    mean = sums / prec
    sd = np.sqrt(1.0 / prec)
    return mean + sd * rng.standard_normal(n_cells)


def draw_cell_outputs(tess: Tessellation, residuals: np.ndarray, X: np.ndarray,
                      sigma_mu: float, rng: np.random.Generator) -> np.ndarray:
    """Conjugate output draw for every cell of ``tess`` (empty cells included)."""
    assignments = cell_partition(X, tess)
    return draw_outputs_from_partition(assignments, tess.n_centres, residuals, sigma_mu, rng)
