"""Dependency-length toolkit: preverbal constituent decomposition,
counterfactual word-order variants, ordering strategies, and the pairwise
ranking experiments built on them."""

__version__ = "0.1.0"

from . import analysis, constituency, features, stats, treebank, variants  # noqa: F401
