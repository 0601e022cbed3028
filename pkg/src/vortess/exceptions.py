"""Package exception hierarchy.

Errors are split by how the command line should report them: bad input
(data files, schemas, configuration) versus numeric failures inside the
sampler. Library code raises these; the CLI maps them to exit codes.
"""


class VortessError(Exception):
    """Base class for all package errors."""


class ConfigError(VortessError, ValueError):
    """Invalid configuration value or combination."""


class DataError(VortessError, ValueError):
    """Unusable input data: missing files, malformed CSV, bad schema."""


class SchemaMismatchError(DataError):
    """Supplied data does not match the columns a model was trained on."""


class InvalidTessellationError(VortessError, ValueError):
    """Tessellation structure violates a required invariant."""


class UndefinedMetricError(VortessError, ValueError):
    """Metric has no value on the given inputs (e.g. single-class AUC)."""


class NumericError(VortessError, ArithmeticError):
    """Non-finite quantity produced during sampling or evaluation."""
