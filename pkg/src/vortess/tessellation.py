"""Voronoi tessellations over covariate subspaces.

A tessellation is a set of centres living on a subset of the covariate
axes. A covariate row is assigned to the cell of its nearest centre,
with distance measured only along the tessellation's own dimensions.
Each cell carries one scalar output; an ensemble of tessellations
contributes the sum of its per-cell outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidTessellationError

__all__ = [
    "Tessellation",
    "assign_cell",
    "cell_partition",
    "tessellation_output",
    "ensemble_sum",
    "ensemble_fit",
]


@dataclass(frozen=True)
class Tessellation:
    """Centres on a covariate subspace.

    Parameters
    ----------
    dims : array-like of int, shape (d,)
        Distinct covariate indices, kept sorted ascending. Must be
        non-empty.
    centres : array-like of float, shape (b, d)
        One row per centre, columns aligned with ``dims``. Rows must be
        pairwise distinct and finite. Must be non-empty.

    Instances are treated as immutable values: the arrays are copied on
    construction and marked read-only, so tessellations can be shared
    freely between posterior snapshots.
    """

    dims: np.ndarray
    centres: np.ndarray

    def __post_init__(self):
        dims = np.array(self.dims, dtype=np.int64, copy=True).reshape(-1)
        centres = np.array(self.centres, dtype=np.float64, copy=True)
        if centres.ndim == 1:
            centres = centres.reshape(1, -1)
        if dims.size == 0:
            raise InvalidTessellationError("tessellation needs at least one dimension")
        if np.any(dims < 0):
            raise InvalidTessellationError("covariate indices must be non-negative")
        if np.any(np.diff(dims) <= 0):
            raise InvalidTessellationError(
                "covariate indices must be sorted and distinct, got %r" % (dims,)
            )
        if centres.ndim != 2 or centres.shape[0] == 0:
            raise InvalidTessellationError("tessellation needs at least one centre")
        if centres.shape[1] != dims.size:
            raise InvalidTessellationError(
                "centre width %d does not match %d dimensions"
                % (centres.shape[1], dims.size)
            )
        if not np.all(np.isfinite(centres)):
            raise InvalidTessellationError("centre coordinates must be finite")
        if np.unique(centres, axis=0).shape[0] != centres.shape[0]:
            raise InvalidTessellationError("centres must be pairwise distinct")
        dims.flags.writeable = False
        centres.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "centres", centres)

    @property
    def n_dims(self) -> int:
        return self.dims.size

    @property
    def n_centres(self) -> int:
        return self.centres.shape[0]

    def validate(self) -> None:
        """Re-run the construction invariants (used by debug checks)."""
        Tessellation(self.dims, self.centres)


def cell_partition(X: np.ndarray, tess: Tessellation) -> np.ndarray:
    """Assign every row of ``X`` to its nearest centre.

    Parameters
    ----------
    X : ndarray, shape (n, p)
        Covariate rows; ``p`` must cover every index in ``tess.dims``.
    tess : Tessellation

    Returns
    -------
    ndarray of int, shape (n,)
        Cell index per row. Distance is squared Euclidean over
        ``tess.dims`` only; exact ties go to the lowest centre index.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be 2-D, got shape %r" % (X.shape,))
    if X.shape[1] <= tess.dims[-1]:
        raise ValueError(
            "X has %d columns but tessellation uses covariate %d"
            % (X.shape[1], int(tess.dims[-1]))
        )
    diff = X[:, tess.dims][:, None, :] - tess.centres[None, :, :]
    d2 = np.sum(diff * diff, axis=-1)
    # np.argmin returns the first minimiser, which is the tie rule we want.
    return np.argmin(d2, axis=1)


def assign_cell(x: np.ndarray, tess: Tessellation) -> int:
    """Nearest-centre cell index for a single covariate row."""
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    return int(cell_partition(x, tess)[0])


def tessellation_output(x: np.ndarray, tess: Tessellation, outputs: np.ndarray) -> float:
    """Per-cell output of one tessellation at a single row.

    ``outputs`` holds one scalar per centre, in centre order.
    """
    outputs = np.asarray(outputs, dtype=np.float64)
    if outputs.shape != (tess.n_centres,):
        raise ValueError(
            "expected %d cell outputs, got shape %r" % (tess.n_centres, outputs.shape)
        )
    return float(outputs[assign_cell(x, tess)])


def ensemble_sum(x: np.ndarray, ensemble) -> float:
    """Sum of per-cell outputs across an ensemble at a single row.

    ``ensemble`` is a sequence of ``(Tessellation, outputs)`` pairs.
    """
    return float(sum(tessellation_output(x, t, m) for t, m in ensemble))


def ensemble_fit(X: np.ndarray, ensemble) -> np.ndarray:
    """Vectorised ensemble sums for every row of ``X``.

    Returns
    -------
    ndarray, shape (n,)
        ``ensemble_sum`` evaluated row-wise.
    """
    X = np.asarray(X, dtype=np.float64)
    total = np.zeros(X.shape[0])
    for tess, outputs in ensemble:
        outputs = np.asarray(outputs, dtype=np.float64)
        total += outputs[cell_partition(X, tess)]
    return total
