"""Incremental graph-Laplacian eigensolver and spectral clustering workbench."""

from .eigen import EigenPair, SolverConfig, batch_smallest, dense_oracle, leading_eigenpair
from .graph import (
    NORMALIZED,
    UNNORMALIZED,
    LaplacianOperator,
    StrengthProfile,
    WeightedGraph,
    build_graph,
    connected_components,
    laplacian,
    normalize_weights,
    strengths,
    trace_of_laplacian,
)
from .incremental import EigenBasis, InflatedOperator, init_basis, next_eigenpair, sweep
from .session import Session, SessionConfig

__all__ = [
    "EigenBasis",
    "EigenPair",
    "InflatedOperator",
    "LaplacianOperator",
    "NORMALIZED",
    "Session",
    "SessionConfig",
    "SolverConfig",
    "StrengthProfile",
    "UNNORMALIZED",
    "WeightedGraph",
    "batch_smallest",
    "build_graph",
    "connected_components",
    "dense_oracle",
    "init_basis",
    "laplacian",
    "leading_eigenpair",
    "next_eigenpair",
    "normalize_weights",
    "strengths",
    "sweep",
    "trace_of_laplacian",
]

__version__ = "0.1.0"
