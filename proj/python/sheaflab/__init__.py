"""Sheaves on graphs: homology, twisted homology, maximum excess and rho-kernels."""

from ._core import (
    DEFAULT_PRIME,
    BudgetError,
    Graph,
    InputError,
    InternalError,
    Sheaf,
    run,
    shnc,
    stallings_core,
)

__all__ = [
    "DEFAULT_PRIME",
    "BudgetError",
    "Graph",
    "InputError",
    "InternalError",
    "Sheaf",
    "run",
    "shnc",
    "stallings_core",
]
