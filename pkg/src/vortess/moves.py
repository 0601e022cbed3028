"""Metropolis-Hastings moves on tessellation structures.

Six move kinds with fixed selection probabilities:

    add centre 0.2, remove centre 0.2, add covariate 0.2,
    remove covariate 0.2, swap covariate 0.1, move centre 0.1.

A drawn move that is impossible in the current state (removing the last
centre, adding to a full covariate set, swapping with no spare
covariate) becomes a NoOp and counts as a rejection. Selection
probabilities are never renormalised, so they cancel between a move and
its reverse and stay out of the acceptance ratio.

Each proposal records ``log_proposal_ratio``, the log density of the
reverse transition minus the log density of the forward one; adding it
to the posterior log difference gives the acceptance exponent. The
centre birth/death ratios consist of the placement density alone: the
uniform victim choice of remove-centre cancels against centre
exchangeability (centres form an unordered set, so the configuration
weight carries a b! that absorbs the 1/b selection), which is what
makes the centre-count marginal of a likelihood-free chain match its
declared truncated-Poisson prior.

Centre coordinates are proposed around uniformly chosen training rows
with isotropic N(0, sigma_c^2) noise; a proposal that would duplicate
an existing centre resamples its noise up to ten times and then gives
up as a NoOp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .exceptions import NumericError
from .priors import TessellationPrior, loglik_from_partition
from .tessellation import Tessellation, cell_partition

__all__ = ["MoveKind", "MOVE_PROBABILITIES", "Proposal", "propose", "propose_move",
           "StepResult", "mh_step"]

_MAX_NOISE_RESAMPLES = 10


class MoveKind(IntEnum):
    ADD_CENTRE = 0
    REMOVE_CENTRE = 1
    ADD_COVARIATE = 2
    REMOVE_COVARIATE = 3
    SWAP_COVARIATE = 4
    MOVE_CENTRE = 5


MOVE_PROBABILITIES = np.array([0.2, 0.2, 0.2, 0.2, 0.1, 0.1])


@dataclass(frozen=True)
class Proposal:
    """A candidate tessellation plus what changed and how likely.

    ``candidate`` is None for a NoOp. ``log_proposal_ratio`` is
    log q(current | candidate) - log q(candidate | current). The change
    record (``centre_index``, ``dim``, ``removed_dim``, ``new_coords``,
    ``old_coords``) lets the prior update incrementally.
    """

    move: MoveKind
    candidate: Tessellation | None
    log_proposal_ratio: float = 0.0
    centre_index: int | None = None
    dim: int | None = None
    removed_dim: int | None = None
    new_coords: np.ndarray | None = None
    old_coords: np.ndarray | None = None

    @property
    def is_noop(self) -> bool:
        return self.candidate is None


def _noop(move: MoveKind) -> Proposal:
    return Proposal(move=move, candidate=None)


def _is_duplicate(centres: np.ndarray, row: np.ndarray, skip: int | None = None) -> bool:
    hits = np.all(centres == row[None, :], axis=1)
    if skip is not None:
        hits[skip] = False
    return bool(hits.any())


def _propose_add_centre(tess, prior, rng):
    X, s = prior.X, prior.config.sigma_c
    d = tess.n_dims
    for _ in range(_MAX_NOISE_RESAMPLES):
        row = int(rng.integers(prior.n))
        coords = X[row, tess.dims] + s * rng.standard_normal(d)
        if not _is_duplicate(tess.centres, coords):
            break
    else:
        return _noop(MoveKind.ADD_CENTRE)
    candidate = Tessellation(tess.dims, np.vstack([tess.centres, coords[None, :]]))
    b = tess.n_centres
    # the 1/(b+1) victim choice of the reverse move cancels against the
    # exchangeability of centres, so only the placement density remains
    ratio = -prior.log_centre_birth_density(tess.dims, coords)
    return Proposal(
        MoveKind.ADD_CENTRE, candidate, ratio,
        centre_index=b, new_coords=coords,
    )


def _propose_remove_centre(tess, prior, rng):
    b = tess.n_centres
    if b < 2:
        return _noop(MoveKind.REMOVE_CENTRE)
    idx = int(rng.integers(b))
    coords = tess.centres[idx].copy()
    candidate = Tessellation(tess.dims, np.delete(tess.centres, idx, axis=0))
    ratio = prior.log_centre_birth_density(tess.dims, coords)
    return Proposal(
        MoveKind.REMOVE_CENTRE, candidate, ratio,
        centre_index=idx, old_coords=coords,
    )


def _propose_move_centre(tess, prior, rng):
    s = prior.config.sigma_c
    b, d = tess.n_centres, tess.n_dims
    idx = int(rng.integers(b))
    old = tess.centres[idx].copy()
    for _ in range(_MAX_NOISE_RESAMPLES):
        new = old + s * rng.standard_normal(d)
        if not _is_duplicate(tess.centres, new, skip=idx):
            break
    else:
        return _noop(MoveKind.MOVE_CENTRE)
    centres = tess.centres.copy()
    centres[idx] = new
    candidate = Tessellation(tess.dims, centres)
    # symmetric Gaussian perturbation: densities cancel
    return Proposal(
        MoveKind.MOVE_CENTRE, candidate, 0.0,
        centre_index=idx, new_coords=new, old_coords=old,
    )


def _propose_add_covariate(tess, prior, rng):
    p, d, b = prior.p, tess.n_dims, tess.n_centres
    if d >= p:
        return _noop(MoveKind.ADD_COVARIATE)
    unused = np.setdiff1d(np.arange(p), tess.dims)
    new_dim = int(unused[rng.integers(unused.size)])
    rows = rng.integers(prior.n, size=b)
    coords = prior.X[rows, new_dim] + prior.config.sigma_c * rng.standard_normal(b)
    pos = int(np.searchsorted(tess.dims, new_dim))
    dims = np.insert(tess.dims, pos, new_dim)
    centres = np.insert(tess.centres, pos, coords, axis=1)
    candidate = Tessellation(dims, centres)
    kde = prior.log_coordinate_density(new_dim, coords)
    ratio = math.log(p - d) - math.log(d + 1) - kde
    return Proposal(
        MoveKind.ADD_COVARIATE, candidate, ratio,
        dim=new_dim, new_coords=coords,
    )


def _propose_remove_covariate(tess, prior, rng):
    p, d = prior.p, tess.n_dims
    if d < 2:
        return _noop(MoveKind.REMOVE_COVARIATE)
    j = int(rng.integers(d))
    gone = int(tess.dims[j])
    coords = tess.centres[:, j].copy()
    centres = np.delete(tess.centres, j, axis=1)
    if np.unique(centres, axis=0).shape[0] != centres.shape[0]:
        # removal would merge two centres; refuse rather than collapse
        return _noop(MoveKind.REMOVE_COVARIATE)
    candidate = Tessellation(np.delete(tess.dims, j), centres)
    kde = prior.log_coordinate_density(gone, coords)
    ratio = math.log(d) - math.log(p - d + 1) + kde
    return Proposal(
        MoveKind.REMOVE_COVARIATE, candidate, ratio,
        removed_dim=gone, old_coords=coords,
    )


def _propose_swap_covariate(tess, prior, rng):
    p, d, b = prior.p, tess.n_dims, tess.n_centres
    if d >= p:
        return _noop(MoveKind.SWAP_COVARIATE)
    j = int(rng.integers(d))
    gone = int(tess.dims[j])
    old_coords = tess.centres[:, j].copy()
    unused = np.setdiff1d(np.arange(p), tess.dims)
    new_dim = int(unused[rng.integers(unused.size)])
    stripped_dims = np.delete(tess.dims, j)
    stripped = np.delete(tess.centres, j, axis=1)
    pos = int(np.searchsorted(stripped_dims, new_dim))
    for _ in range(_MAX_NOISE_RESAMPLES):
        rows = rng.integers(prior.n, size=b)
        coords = prior.X[rows, new_dim] + prior.config.sigma_c * rng.standard_normal(b)
        centres = np.insert(stripped, pos, coords, axis=1)
        if np.unique(centres, axis=0).shape[0] == b:
            break
    else:
        return _noop(MoveKind.SWAP_COVARIATE)
    candidate = Tessellation(np.insert(stripped_dims, pos, new_dim), centres)
    ratio = prior.log_coordinate_density(gone, old_coords) - prior.log_coordinate_density(
        new_dim, coords
    )
    return Proposal(
        MoveKind.SWAP_COVARIATE, candidate, ratio,
        dim=new_dim, removed_dim=gone, new_coords=coords, old_coords=old_coords,
    )


_DISPATCH = {
    MoveKind.ADD_CENTRE: _propose_add_centre,
    MoveKind.REMOVE_CENTRE: _propose_remove_centre,
    MoveKind.ADD_COVARIATE: _propose_add_covariate,
    MoveKind.REMOVE_COVARIATE: _propose_remove_covariate,
    MoveKind.SWAP_COVARIATE: _propose_swap_covariate,
    MoveKind.MOVE_CENTRE: _propose_move_centre,
}


def propose_move(tess: Tessellation, kind: MoveKind, prior: TessellationPrior,
                 rng: np.random.Generator) -> Proposal:
    """Build a proposal of a requested kind (NoOp when impossible)."""
    return _DISPATCH[MoveKind(kind)](tess, prior, rng)


def propose(tess: Tessellation, prior: TessellationPrior,
            rng: np.random.Generator) -> Proposal:
    """Draw a move kind from the fixed probabilities and build its proposal."""
    kind = MoveKind(int(rng.choice(len(MOVE_PROBABILITIES), p=MOVE_PROBABILITIES)))
    return propose_move(tess, kind, prior, rng)


@dataclass
class StepResult:
    tessellation: Tessellation
    accepted: bool
    move: MoveKind
    noop: bool
    assignments: np.ndarray | None


def mh_step(tess: Tessellation, residuals: np.ndarray | None,
            prior: TessellationPrior, rng: np.random.Generator,
            assignments: np.ndarray | None = None) -> StepResult:
    """One Metropolis-Hastings update of a tessellation structure.

    Parameters
    ----------
    tess : current tessellation
    residuals : backfitting residuals for the collapsed likelihood, or
        None to run against the prior alone (used by stationarity tests)
    prior : TessellationPrior bound to the training matrix
    rng : numpy Generator
    assignments : optional cached ``cell_partition(prior.X, tess)``

    Returns
    -------
    StepResult with the (possibly unchanged) tessellation, whether the
    candidate was accepted, the move kind, whether the move was a NoOp,
    and the cell assignments of the returned tessellation (None when
    running prior-only).

    The acceptance exponent is the candidate-minus-current difference of
    collapsed log likelihood plus log prior, plus the proposal ratio of
    the move. A non-finite exponent raises ``NumericError``.
    """
    prop = propose(tess, prior, rng)
    if prop.is_noop:
        return StepResult(tess, False, prop.move, True, assignments)

    delta = prior.log_prior_delta(tess, prop) + prop.log_proposal_ratio
    cand_assign = None
    if residuals is not None:
        if assignments is None:
            assignments = cell_partition(prior.X, tess)
        cand_assign = cell_partition(prior.X, prop.candidate)
        sig = prior.sigma_mu
        delta += loglik_from_partition(
            cand_assign, prop.candidate.n_centres, residuals, sig
        ) - loglik_from_partition(assignments, tess.n_centres, residuals, sig)

    if not np.isfinite(delta):
        raise NumericError(
            "non-finite acceptance exponent for %s move" % prop.move.name
        )

    # u in (0, 1]; log u <= delta accepts with probability min(1, e^delta)
    if math.log(1.0 - rng.random()) <= delta:
        return StepResult(prop.candidate, True, prop.move, False, cand_assign)
    return StepResult(tess, False, prop.move, False, assignments)
