"""Explicit FCRK / FCRKN methods for retarded functional differential equations."""

from ._core import (
    ConfigError,
    DomainError,
    IntegrationError,
    check,
    converge,
    estimate_order,
    methods,
    run_cli,
    solve,
    tableau_text,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "IntegrationError",
    "check",
    "converge",
    "estimate_order",
    "methods",
    "run_cli",
    "solve",
    "tableau_text",
]
