"""Sparse undirected weighted graphs and matrix-free Laplacian operators.

The weight matrix W is held as a canonical edge list (each undirected edge
once, i < j) plus a cached CSR adjacency with both (i, j) and (j, i) entries
so that a Laplacian matvec costs O(n + m).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph

from .errors import (
    DimensionMismatch,
    DuplicateEdge,
    IndexOutOfRange,
    NonpositiveWeight,
    SelfLoop,
    ZeroStrengthNode,
)

UNNORMALIZED = "unnormalized"
NORMALIZED = "normalized"
VARIANTS = (UNNORMALIZED, NORMALIZED)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Simple undirected weighted graph with strictly positive edge weights.

    ``rows[k] < cols[k]`` for every stored edge, edges sorted lexicographically.
    """

    n: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray

    @property
    def m(self) -> int:
        return len(self.rows)

    def edges(self) -> Iterable[tuple[int, int, float]]:
        for i, j, w in zip(self.rows, self.cols, self.weights):
            yield int(i), int(j), float(w)

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Symmetric CSR weight matrix with both triangles materialized."""
        r = np.concatenate([self.rows, self.cols])
        c = np.concatenate([self.cols, self.rows])
        w = np.concatenate([self.weights, self.weights])
        return sp.csr_matrix((w, (r, c)), shape=(self.n, self.n))


@dataclass(frozen=True)
class StrengthProfile:
    strengths: np.ndarray
    total: float


def build_graph(n: int, edge_list: Sequence[tuple[int, int, float]]) -> WeightedGraph:
    """Validate and canonicalize an edge list into a WeightedGraph."""
    if n < 0:
        raise IndexOutOfRange(f"node count must be nonnegative, got {n}")
    rows = np.empty(len(edge_list), dtype=np.int64)
    cols = np.empty(len(edge_list), dtype=np.int64)
    weights = np.empty(len(edge_list), dtype=np.float64)
    for k, (i, j, w) in enumerate(edge_list):
        i, j = int(i), int(j)
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"edge ({i}, {j}) out of range for n={n}")
        if i == j:
            raise SelfLoop(f"self-loop at node {i}")
        w = float(w)
        if not (w > 0) or not np.isfinite(w):
            raise NonpositiveWeight(f"edge ({i}, {j}) has weight {w}")
        rows[k], cols[k] = (i, j) if i < j else (j, i)
        weights[k] = w
    order = np.lexsort((cols, rows))
    rows, cols, weights = rows[order], cols[order], weights[order]
    if len(rows) > 1:
        dup = (rows[1:] == rows[:-1]) & (cols[1:] == cols[:-1])
        if dup.any():
            k = int(np.flatnonzero(dup)[0])
            raise DuplicateEdge(f"duplicate edge ({rows[k]}, {cols[k]})")
    return WeightedGraph(n=n, rows=rows, cols=cols, weights=weights)


def strengths(g: WeightedGraph) -> StrengthProfile:
    s = np.zeros(g.n)
    np.add.at(s, g.rows, g.weights)
    np.add.at(s, g.cols, g.weights)
    return StrengthProfile(strengths=s, total=float(s.sum()))


def connected_components(g: WeightedGraph) -> tuple[int, np.ndarray]:
    """Component count and per-node labels, labeled by smallest contained node."""
    if g.n == 0:
        return 0, np.empty(0, dtype=np.int64)
    delta, raw = csgraph.connected_components(g.adjacency, directed=False)
    # relabel so that component k contains the k-th smallest "first node"
    first_seen = {}
    remap = np.empty(delta, dtype=np.int64)
    next_label = 0
    for node in range(g.n):
        c = raw[node]
        if c not in first_seen:
            first_seen[c] = True
            remap[c] = next_label
            next_label += 1
    return delta, remap[raw]


def normalize_weights(g: WeightedGraph) -> WeightedGraph:
    """Scale each weight to W_ij / sqrt(s_i * s_j)."""
    prof = strengths(g)
    if (prof.strengths == 0).any():
        bad = int(np.flatnonzero(prof.strengths == 0)[0])
        raise ZeroStrengthNode(f"node {bad} has zero strength")
    scale = 1.0 / np.sqrt(prof.strengths)
    w = g.weights * scale[g.rows] * scale[g.cols]
    return WeightedGraph(n=g.n, rows=g.rows, cols=g.cols, weights=w)


@dataclass(frozen=True, eq=False)
class LaplacianOperator:
    """Matrix-free graph Laplacian, unnormalized (S - W) or normalized
    (I - S^{-1/2} W S^{-1/2})."""

    variant: str
    graph: WeightedGraph
    profile: StrengthProfile
    component_count: int
    component_labels: np.ndarray
    _inv_sqrt_s: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def total_strength(self) -> float:
        return self.profile.total

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.n:
            raise DimensionMismatch(f"expected length {self.n}, got {x.shape[0]}")
        W = self.graph.adjacency
        if self.variant == UNNORMALIZED:
            return self.profile.strengths * x - W @ x
        d = self._inv_sqrt_s
        return x - d * (W @ (d * x))

    def to_dense(self) -> np.ndarray:
        W = self.graph.adjacency.toarray()
        if self.variant == UNNORMALIZED:
            return np.diag(self.profile.strengths) - W
        d = self._inv_sqrt_s
        return np.eye(self.n) - (d[:, None] * W) * d[None, :]


def laplacian(g: WeightedGraph, variant: str = UNNORMALIZED) -> LaplacianOperator:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    prof = strengths(g)
    inv_sqrt = None
    if variant == NORMALIZED:
        if (prof.strengths == 0).any():
            bad = int(np.flatnonzero(prof.strengths == 0)[0])
            raise ZeroStrengthNode(f"node {bad} has zero strength")
        inv_sqrt = 1.0 / np.sqrt(prof.strengths)
    delta, labels = connected_components(g)
    return LaplacianOperator(
        variant=variant,
        graph=g,
        profile=prof,
        component_count=delta,
        component_labels=labels,
        _inv_sqrt_s=inv_sqrt,
    )


def trace_of_laplacian(op: LaplacianOperator) -> float:
    if op.variant == UNNORMALIZED:
        return op.profile.total
    return float(op.n)
