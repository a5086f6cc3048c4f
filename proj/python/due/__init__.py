"""Python bindings for the DUE load-disaggregation library."""

from ._core import (
    ConfigError,
    DataError,
    Error,
    InvariantError,
    appliance_table,
    categories,
    disaggregate,
    est_acc,
    overall_est_acc,
    run,
    simulate,
)

__all__ = [
    "ConfigError",
    "DataError",
    "Error",
    "InvariantError",
    "appliance_table",
    "categories",
    "disaggregate",
    "est_acc",
    "overall_est_acc",
    "run",
    "simulate",
]
