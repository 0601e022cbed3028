"""Latent-variable updates for the probit link.

Each binary response is augmented with a latent Gaussian variable whose
sign matches the observed class: strictly positive for class 1, at most
zero for class 0. Conditional on the current ensemble fit the latents
are unit-variance normals truncated to the matching half-line.

Sampling mixes two regimes so the draw stays well conditioned even when
the conditional mean is far from the truncation point (|mean| up to
about 30): inverse-CDF via the survival function when the standardised
truncation bound is moderate, and an exponential-proposal rejection
sampler deep in the tail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

__all__ = ["LatentState", "sample_truncated_normal", "draw_latents", "update_latents"]

# standardised lower bound beyond which inverse-CDF gives way to rejection
_TAIL_SWITCH = 4.0
_TINY = np.finfo(np.float64).tiny


def _lower_truncated_std(lower: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw xi ~ N(0, 1) conditioned on xi > lower, elementwise."""
    lower = np.asarray(lower, dtype=np.float64)
    out = np.empty_like(lower)

    easy = lower < _TAIL_SWITCH
    if np.any(easy):
        a = lower[easy]
        tail = ndtr(-a)  # P(xi > a), accurate for any a
        # u in [0, 1) so the survival argument stays in (0, tail]
        u = rng.random(a.shape)
        out[easy] = -ndtri(tail * (1.0 - u))

    hard = ~easy
    if np.any(hard):
        a = lower[hard]
        lam = 0.5 * (a + np.sqrt(a * a + 4.0))
        draws = np.empty_like(a)
        pending = np.arange(a.size)
        while pending.size:
            ap = a.reshape(-1)[pending]
            lp = lam.reshape(-1)[pending]
            # shifted exponential proposal, log1p keeps the argument in (0, 1]
            x = ap - np.log1p(-rng.random(pending.size)) / lp
            accept = rng.random(pending.size) < np.exp(-0.5 * (x - lp) ** 2)
            draws.reshape(-1)[pending[accept]] = x[accept]
            pending = pending[~accept]
        out[hard] = draws

    return out


def sample_truncated_normal(mean, positive_side: bool, rng: np.random.Generator, size=None):
    """Draw from N(mean, 1) restricted to one side of zero.

    Parameters
    ----------
    mean : float or ndarray
        Mean of the underlying normal.
    positive_side : bool
        True restricts to (0, inf); False restricts to (-inf, 0].
    rng : numpy Generator
    size : optional shape for scalar ``mean``

    Returns
    -------
    float or ndarray matching the broadcast shape.
    """
    mean_arr = np.asarray(mean, dtype=np.float64)
    scalar = mean_arr.ndim == 0 and size is None
    if size is not None:
        mean_arr = np.broadcast_to(mean_arr, size).copy()
    mean_arr = np.atleast_1d(mean_arr)

    if positive_side:
        xi = _lower_truncated_std(-mean_arr, rng)
        z = np.maximum(mean_arr + xi, _TINY)
    else:
        xi = _lower_truncated_std(mean_arr, rng)
        z = np.minimum(mean_arr - xi, 0.0)

    return float(z[0]) if scalar else z


def draw_latents(fitted: np.ndarray, y: np.ndarray, rng: np.random.Generator,
                 offset: float = 0.0) -> np.ndarray:
    """Fresh latent draws for every observation.

    ``fitted`` is the current ensemble sum per row; ``offset`` shifts the
    conditional mean (the probit intercept). Observations with ``y == 1``
    get draws in (0, inf), the rest in (-inf, 0].
    """
    fitted = np.asarray(fitted, dtype=np.float64)
    y = np.asarray(y)
    mean = fitted + offset
    sign = np.where(y == 1, 1.0, -1.0)
    xi = _lower_truncated_std(-sign * mean, rng)
    z = mean + sign * xi
    pos = y == 1
    z[pos] = np.maximum(z[pos], _TINY)
    z[~pos] = np.minimum(z[~pos], 0.0)
    return z


@dataclass
class LatentState:
    """Latents plus the cached ensemble fit they were drawn around.

    ``z[i] > 0`` exactly when ``y[i] == 1``; the cache lets the sampler
    form backfitting residuals without re-evaluating every tessellation.
    """

    z: np.ndarray
    fitted: np.ndarray

    def check_signs(self, y: np.ndarray) -> None:
        y = np.asarray(y)
        ok = np.all((self.z > 0) == (y == 1))
        if not ok:
            raise AssertionError("latent signs inconsistent with responses")


def update_latents(state: LatentState, y: np.ndarray, rng: np.random.Generator,
                   offset: float = 0.0) -> LatentState:
    """Redraw every latent around the cached fit; the cache is unchanged."""
    return LatentState(draw_latents(state.fitted, y, rng, offset), state.fitted)
