"""Synthetic two-covariate classification problems on the unit square.

Both families draw x uniformly on [0, 1]^2 and label it by a known
boundary: crossed axes rotated by an angle theta, or a sinusoid of
amplitude alpha. Points exactly on a boundary get label 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError

__all__ = [
    "ROTATED_AXIS",
    "SINUSOID",
    "ROTATED_AXIS_ANGLES",
    "SINUSOID_AMPLITUDES",
    "rotated_axis_label",
    "sinusoid_label",
    "SyntheticSpec",
    "generate_dataset",
]

ROTATED_AXIS = "rotated_axis"
SINUSOID = "sinusoid"

# default sweep grids: seven angles to pi/4, eleven amplitudes to 1
ROTATED_AXIS_ANGLES = tuple(k * math.pi / 24.0 for k in range(7))
SINUSOID_AMPLITUDES = tuple(k / 10.0 for k in range(11))


def rotated_axis_label(x1, x2, theta: float):
    """1 where the point, rotated counter-clockwise by theta, has
    coordinates of equal sign (their product strictly positive)."""
    u1 = math.cos(theta) * np.asarray(x1) - math.sin(theta) * np.asarray(x2)
    u2 = math.sin(theta) * np.asarray(x1) + math.cos(theta) * np.asarray(x2)
    labels = (u1 * u2 > 0).astype(np.int64)
    return int(labels) if labels.ndim == 0 else labels


def sinusoid_label(x1, x2, alpha: float):
    """1 where x2 lies strictly above alpha * sin(10 * x1)."""
    labels = (np.asarray(x2) > alpha * np.sin(10.0 * np.asarray(x1))).astype(np.int64)
    return int(labels) if labels.ndim == 0 else labels


@dataclass(frozen=True)
class SyntheticSpec:
    """One sampling task: which boundary, its parameter, size, and seed."""

    kind: str
    parameter: float
    n: int
    seed: int

    def __post_init__(self):
        if self.kind not in (ROTATED_AXIS, SINUSOID):
            raise ConfigError("unknown synthetic kind %r" % (self.kind,))
        if self.kind == ROTATED_AXIS and not 0.0 <= self.parameter <= math.pi / 4.0:
            raise ConfigError("rotation angle must lie in [0, pi/4]")
        if self.kind == SINUSOID and self.parameter < 0.0:
            raise ConfigError("sinusoid amplitude must be non-negative")
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ConfigError("n must be a positive integer")

    def label(self, x1, x2):
        if self.kind == ROTATED_AXIS:
            return rotated_axis_label(x1, x2, self.parameter)
        return sinusoid_label(x1, x2, self.parameter)


def generate_dataset(spec: SyntheticSpec):
    """Sample n uniform points on the unit square with their labels."""
    rng = np.random.default_rng(spec.seed)
    X = rng.random((spec.n, 2))
    y = spec.label(X[:, 0], X[:, 1])
    return X, y
