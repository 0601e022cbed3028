"""CSV ingestion, typing, preprocessing, and index-level splitting.

Tables come in as header-labelled CSV with one designated target
column. Schema hints (a plain dict, usually parsed from a JSON file)
can declare the target, the label mapped to class 1, per-column types,
and columns to discard:

    {"target": "class", "positive": "malignant",
     "types": {"colour": "categorical"}, "drop": ["id"]}

Preprocessing is fit on training rows only: numeric columns are
z-scored with training statistics (constant columns dropped),
categorical columns become indicator sets with the first sorted level
dropped, and rows containing missing values ("?" counts as missing) are
removed. The fitted transform is reusable on test rows and is stored
alongside models so prediction input gets identical treatment.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .exceptions import DataError

__all__ = [
    "SCHEMA_KEYS",
    "RawTable",
    "load_csv",
    "drop_missing_rows",
    "Preprocessor",
    "preprocess",
    "train_test_split",
    "kfold_indices",
    "write_csv",
    "make_frame",
]

SCHEMA_KEYS = frozenset({"target", "positive", "types", "drop"})


@dataclass
class RawTable:
    """A typed table: covariate columns plus an optional mapped target.

    The target column, when present, holds floats in {0.0, 1.0} with
    NaN marking missing labels; covariates keep their declared type.
    """

    frame: pd.DataFrame
    target: str | None
    numeric_columns: tuple
    categorical_columns: tuple

    @property
    def n_rows(self) -> int:
        return len(self.frame)

    @property
    def covariate_names(self) -> tuple:
        return tuple(c for c in self.frame.columns if c != self.target)

    def labels(self) -> np.ndarray | None:
        if self.target is None:
            return None
        values = self.frame[self.target].to_numpy(dtype=np.float64)
        if np.isnan(values).any():
            raise DataError("target column still contains missing labels")
        return values.astype(np.int64)

    def select(self, indices) -> "RawTable":
        return RawTable(
            self.frame.iloc[np.asarray(indices)].copy(),
            self.target,
            self.numeric_columns,
            self.categorical_columns,
        )


def _map_target(column: pd.Series, positive, name: str) -> pd.Series:
    present = column.dropna()
    if positive is not None:
        hits = present == positive
        if not hits.any():
            hits = present.astype(str) == str(positive)
        if not hits.any():
            raise DataError(
                "positive label %r never occurs in target column %r (values: %s)"
                % (positive, name, sorted(map(str, set(present)))[:8])
            )
        mapped = column.copy().astype(object)
        mask = column.notna()
        direct = column[mask] == positive
        if not direct.any():
            direct = column[mask].astype(str) == str(positive)
        mapped[mask] = direct.astype(float)
        return mapped.astype(np.float64)
    values = set(present.tolist())
    if not values <= {0, 1, 0.0, 1.0}:
        raise DataError(
            "target column %r has values %s; add a 'positive' hint to map them"
            % (name, sorted(map(str, values))[:8])
        )
    return column.astype(np.float64)


def load_csv(path, schema: dict | None = None, target: str | None = None,
             require_target: bool = True) -> RawTable:
    """Read a header-row CSV into a typed RawTable.

    ``target`` overrides the schema's target designation. With
    ``require_target=False`` a file without the target column is
    accepted as prediction input (``table.target`` is then None).
    """
    schema = dict(schema or {})
    unknown = set(schema) - SCHEMA_KEYS
    if unknown:
        raise DataError("unknown schema keys: %s" % ", ".join(sorted(unknown)))
    try:
        frame = pd.read_csv(path, na_values=["?"], skipinitialspace=True)
    except FileNotFoundError:
        raise DataError("no such file: %s" % (path,)) from None
    except pd.errors.EmptyDataError:
        raise DataError("%s is empty" % (path,)) from None
    except pd.errors.ParserError as exc:
        raise DataError("malformed CSV %s: %s" % (path, exc)) from None
    if frame.shape[0] == 0:
        raise DataError("%s has a header but no data rows" % (path,))

    for col in schema.get("drop", []):
        if col not in frame.columns:
            raise DataError("schema drops %r but the file has no such column" % (col,))
        frame = frame.drop(columns=col)

    target_name = target if target is not None else schema.get("target")
    if target_name is None:
        raise DataError("no target column designated (schema 'target' or --target)")
    has_target = target_name in frame.columns
    if not has_target and require_target:
        raise DataError(
            "target column %r not found; file has: %s"
            % (target_name, ", ".join(map(str, frame.columns[:12])))
        )
    if has_target:
        frame[target_name] = _map_target(
            frame[target_name], schema.get("positive"), target_name
        )

    declared = dict(schema.get("types", {}))
    for col, kind in declared.items():
        if col not in frame.columns:
            raise DataError("types hint names unknown column %r" % (col,))
        if kind not in ("numeric", "categorical"):
            raise DataError("column %r has unknown type %r" % (col, kind))

    numeric, categorical = [], []
    for col in frame.columns:
        if col == target_name and has_target:
            continue
        kind = declared.get(col)
        if kind == "numeric" or (kind is None and pd.api.types.is_numeric_dtype(frame[col])):
            coerced = pd.to_numeric(frame[col], errors="coerce")
            bad = frame[col].notna() & coerced.isna()
            if bad.any():
                row = int(np.flatnonzero(bad.to_numpy())[0])
                raise DataError(
                    "column %r, data row %d: cannot parse %r as numeric"
                    % (col, row, frame[col].iloc[row])
                )
            frame[col] = coerced.astype(np.float64)
            numeric.append(col)
        else:
            mask = frame[col].notna()
            frame[col] = frame[col].astype(object).where(~mask, frame[col][mask].astype(str))
            categorical.append(col)

    return RawTable(frame, target_name if has_target else None,
                    tuple(numeric), tuple(categorical))


def drop_missing_rows(table: RawTable) -> tuple[RawTable, int]:
    """Remove rows with any missing entry; returns the kept table and count."""
    kept = table.frame.dropna()
    dropped = len(table.frame) - len(kept)
    if len(kept) == 0:
        raise DataError("every row contains missing values")
    return RawTable(kept, table.target, table.numeric_columns,
                    table.categorical_columns), dropped


@dataclass
class Preprocessor:
    """Frozen training-fold statistics and encodings.

    ``feature_names`` fixes the covariate-matrix column order: retained
    numerics first (z-scored), then per-categorical indicators named
    "column=level" over the sorted levels with the first dropped.
    ``source_columns`` maps each output column back to the table column
    it came from, which lets reports aggregate indicator groups.
    """

    target: str | None
    numeric_columns: tuple
    means: tuple
    stds: tuple
    categorical_columns: tuple
    levels: dict
    feature_names: tuple
    source_columns: tuple

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @classmethod
    def fit(cls, table: RawTable) -> "Preprocessor":
        work, dropped = drop_missing_rows(table)
        if dropped:
            warnings.warn("dropped %d rows with missing values" % dropped, UserWarning)
        frame = work.frame
        numerics, means, stds = [], [], []
        for col in table.numeric_columns:
            mean = float(frame[col].mean())
            std = float(frame[col].std(ddof=0))
            if std == 0.0 or not math.isfinite(std):
                warnings.warn("dropping constant column %r" % (col,), UserWarning)
                continue
            numerics.append(col)
            means.append(mean)
            stds.append(std)
        level_map = {}
        for col in table.categorical_columns:
            levels = tuple(sorted(set(frame[col].dropna().astype(str))))
            if len(levels) < 2:
                warnings.warn(
                    "dropping single-level categorical column %r" % (col,), UserWarning
                )
                continue
            level_map[col] = levels
        names, sources = [], []
        for col in numerics:
            names.append(str(col))
            sources.append(str(col))
        for col, levels in level_map.items():
            for level in levels[1:]:
                names.append("%s=%s" % (col, level))
                sources.append(str(col))
        if not names:
            raise DataError("no usable covariate columns after preprocessing")
        return cls(
            target=table.target,
            numeric_columns=tuple(numerics),
            means=tuple(means),
            stds=tuple(stds),
            categorical_columns=tuple(level_map),
            levels=level_map,
            feature_names=tuple(names),
            source_columns=tuple(sources),
        )

    def transform(self, table: RawTable, return_index: bool = False):
        """Encode a table with the fitted statistics.

        Returns (X, y), or (X, y, kept row index) with ``return_index``;
        y is None when the table carries no target. Rows with missing
        values are dropped (warned), and categorical values never seen
        in training encode as all-zero indicators.
        """
        needed = list(self.numeric_columns) + list(self.categorical_columns)
        missing = [c for c in needed if c not in table.frame.columns]
        if missing:
            raise DataError("table lacks required columns: %s" % ", ".join(missing))
        subset = needed + ([table.target] if table.target is not None else [])
        work = table.frame[subset].dropna()
        dropped = len(table.frame) - len(work)
        if dropped:
            warnings.warn("dropped %d rows with missing values" % dropped, UserWarning)
        if len(work) == 0:
            raise DataError("every row contains missing values")

        blocks = []
        for col, mean, std in zip(self.numeric_columns, self.means, self.stds):
            blocks.append(((work[col].to_numpy(np.float64) - mean) / std)[:, None])
        for col in self.categorical_columns:
            levels = self.levels[col]
            raw = work[col].astype(str).to_numpy()
            unseen = sorted(set(raw) - set(levels))
            if unseen:
                warnings.warn(
                    "column %r: unseen level(s) %s encoded as all zeros"
                    % (col, unseen), UserWarning,
                )
            block = np.zeros((len(work), len(levels) - 1))
            for j, level in enumerate(levels[1:]):
                block[:, j] = raw == level
            blocks.append(block)
        X = np.hstack(blocks)
        y = None
        if table.target is not None:
            y = work[table.target].to_numpy(np.float64).astype(np.int64)
        if return_index:
            return X, y, work.index.to_numpy()
        return X, y

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "numeric_columns": list(self.numeric_columns),
            "means": list(self.means),
            "stds": list(self.stds),
            "categorical_columns": list(self.categorical_columns),
            "levels": {k: list(v) for k, v in self.levels.items()},
            "feature_names": list(self.feature_names),
            "source_columns": list(self.source_columns),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Preprocessor":
        return cls(
            target=data["target"],
            numeric_columns=tuple(data["numeric_columns"]),
            means=tuple(data["means"]),
            stds=tuple(data["stds"]),
            categorical_columns=tuple(data["categorical_columns"]),
            levels={k: tuple(v) for k, v in data["levels"].items()},
            feature_names=tuple(data["feature_names"]),
            source_columns=tuple(data["source_columns"]),
        )


def preprocess(table: RawTable):
    """Fit on a training table; returns (X, y, fitted Preprocessor)."""
    prep = Preprocessor.fit(table)
    X, y = prep.transform(table)
    return X, y, prep


def train_test_split(table: RawTable, fraction: float, seed: int):
    """Disjoint exhaustive row split, floor(fraction * n) rows to train."""
    if not 0.0 < fraction < 1.0:
        raise DataError("split fraction must lie strictly inside (0, 1)")
    n = table.n_rows
    n_train = int(math.floor(fraction * n))
    if n_train == 0 or n_train == n:
        raise DataError("fraction %g leaves an empty side for n=%d" % (fraction, n))
    perm = np.random.default_rng(seed).permutation(n)
    return table.select(perm[:n_train]), table.select(perm[n_train:])


def kfold_indices(n: int, k: int, seed: int):
    """k near-equal disjoint covering index arrays, seed-reproducible."""
    if k < 2:
        raise DataError("k must be at least 2")
    if n < k:
        raise DataError("cannot form %d folds from %d rows" % (k, n))
    perm = np.random.default_rng(seed).permutation(n)
    return [np.sort(fold) for fold in np.array_split(perm, k)]


def write_csv(frame: pd.DataFrame, path) -> None:
    """Header-row CSV, UTF-8, minimal quoting, newline line ends."""
    frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")


def make_frame(X: np.ndarray, y=None, feature_names=None, target: str = "y") -> pd.DataFrame:
    """Bundle a covariate matrix (and optional labels) as a DataFrame."""
    X = np.asarray(X)
    if feature_names is None:
        feature_names = ["x%d" % (j + 1) for j in range(X.shape[1])]
    frame = pd.DataFrame(X, columns=list(feature_names))
    if y is not None:
        frame[target] = np.asarray(y)
    return frame
