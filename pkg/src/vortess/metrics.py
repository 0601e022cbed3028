"""Classification metrics: accuracy, ROC curve, and AUC.

AUC is computed from midranks (the Mann-Whitney statistic), which
handles tied scores exactly; the trapezoidal area under the ROC curve
is the same number and serves as a cross-check, not as the definition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .exceptions import UndefinedMetricError

__all__ = ["accuracy", "roc_auc", "roc_curve", "trapezoid_area", "EvalReport"]


def _binary_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("%s must be a non-empty 1-D sequence" % name)
    if not np.all(np.isin(arr, (0, 1))):
        raise ValueError("%s must contain only 0 and 1" % name)
    return arr.astype(np.int64)


def accuracy(y_true, y_pred) -> float:
    """Percentage of matching labels, 100 * matches / n."""
    y_true = _binary_vector(y_true, "y_true")
    y_pred = _binary_vector(y_pred, "y_pred")
    if y_true.shape != y_pred.shape:
        raise ValueError(
            "length mismatch: %d true labels vs %d predictions"
            % (y_true.size, y_pred.size)
        )
    return 100.0 * float(np.mean(y_true == y_pred))


def _check_scores(y_true, scores):
    y_true = _binary_vector(y_true, "y_true")
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape != y_true.shape:
        raise ValueError("scores and labels must have the same length")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    n1 = int(y_true.sum())
    if n1 == 0 or n1 == y_true.size:
        raise UndefinedMetricError(
            "AUC needs both classes; y_true contains only class %d" % int(y_true[0])
        )
    return y_true, scores, n1


def roc_auc(y_true, scores) -> float:
    """Probability a random positive outscores a random negative.

    Ties count half, via midranks: AUC = (R1 - n1(n1+1)/2) / (n1 n0)
    where R1 is the rank sum of the positives.
    """
    y_true, scores, n1 = _check_scores(y_true, scores)
    n0 = y_true.size - n1
    rank_sum = float(rankdata(scores)[y_true == 1].sum())
    return (rank_sum - n1 * (n1 + 1) / 2.0) / (n1 * n0)


def roc_curve(y_true, scores) -> list[tuple[float, float]]:
    """(false-positive rate, true-positive rate) per distinct threshold.

    Thresholds sweep the distinct scores from high to low; each point
    classifies rows with score >= threshold as positive. The list starts
    at (0, 0) and ends at (1, 1).
    """
    y_true, scores, n1 = _check_scores(y_true, scores)
    n0 = y_true.size - n1
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_true = y_true[order]
    tp = np.cumsum(sorted_true)
    fp = np.cumsum(1 - sorted_true)
    # last index of every run of equal scores: the cut just below that run
    last = np.flatnonzero(np.diff(sorted_scores) != 0)
    last = np.append(last, scores.size - 1)
    points = [(0.0, 0.0)]
    points.extend((fp[i] / n0, tp[i] / n1) for i in last)
    return points


def trapezoid_area(points) -> float:
    """Area under a piecewise-linear curve given as (x, y) pairs."""
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    return float(np.sum(np.diff(xs) * (ys[1:] + ys[:-1]) / 2.0))


@dataclass(frozen=True)
class EvalReport:
    """Evaluation summary of one model on one test set."""

    accuracy: float
    auc: float
    roc_points: tuple
    n_test: int
    threshold: float

    @classmethod
    def from_scores(cls, y_true, scores, threshold: float = 0.5) -> "EvalReport":
        y = _binary_vector(y_true, "y_true")
        scores = np.asarray(scores, dtype=np.float64)
        preds = (scores > threshold).astype(np.int64)
        return cls(
            accuracy=accuracy(y, preds),
            auc=roc_auc(y, scores),
            roc_points=tuple(roc_curve(y, scores)),
            n_test=int(y.size),
            threshold=float(threshold),
        )

    def lines(self) -> list[str]:
        return [
            "n_test    %d" % self.n_test,
            "threshold %.6g" % self.threshold,
            "accuracy  %.4f" % self.accuracy,
            "auc       %.6f" % self.auc,
        ]

    def as_dict(self) -> dict:
        return {
            "n_test": self.n_test,
            "threshold": self.threshold,
            "accuracy": self.accuracy,
            "auc": self.auc,
        }
