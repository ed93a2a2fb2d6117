"""Generalized PCA: segmentation of data drawn from a union of linear subspaces.

Point sets are D x N arrays (one point per column). Segmentation and discovery
results are dicts with the same layout as the CLI JSON reports.
"""

from ._core import (
    DEFAULT_DELTA,
    DEFAULT_KAPPA,
    DegenerateError,
    DiscoveryError,
    FitError,
    GpcaError,
    InputError,
    PeelError,
    SelectionError,
    angle_error,
    classification_rate,
    discover,
    discover_equal_dim,
    em_mixture_pca,
    fit_vanishing,
    generate,
    k_subspaces,
    monomial_count,
    segment,
    veronese,
)

__all__ = [
    "DEFAULT_DELTA",
    "DEFAULT_KAPPA",
    "DegenerateError",
    "DiscoveryError",
    "FitError",
    "GpcaError",
    "InputError",
    "PeelError",
    "SelectionError",
    "angle_error",
    "classification_rate",
    "discover",
    "discover_equal_dim",
    "em_mixture_pca",
    "fit_vanishing",
    "generate",
    "k_subspaces",
    "monomial_count",
    "segment",
    "veronese",
]
