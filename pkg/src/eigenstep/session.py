"""Stateful user-guided clustering sessions.

Each session carries the original input weights plus the pipeline graph
(strength-normalized weights and the chosen Laplacian of them). A step makes
sure the eigenbasis covers the session's current K, clusters the rows of the
first K eigenvectors, evaluates the five metrics, records the report, and
advances K by one. The analyst accepts some recorded K to close the loop.
"""

from __future__ import annotations

import json
import secrets
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import clustering
from .clustering import ClusterReport, evaluate, kmeans_rows
from .eigen import SolverConfig
from .errors import BasisFull, DisconnectedGraph, SessionClosed, UnknownK
from .graph import (
    UNNORMALIZED,
    VARIANTS,
    LaplacianOperator,
    WeightedGraph,
    build_graph,
    laplacian,
    normalize_weights,
)
from .incremental import EigenBasis, init_basis, next_eigenpair

ACTIVE = "active"
ACCEPTED = "accepted"


@dataclass
class SessionConfig:
    variant: str = UNNORMALIZED
    allow_disconnected: bool = False
    solver_seed: int = 0
    solver_tolerance: float = 1e-10
    kmeans_seed: int = 0
    kmeans_restarts: int = 10

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")

    def solver(self) -> SolverConfig:
        return SolverConfig(tolerance=self.solver_tolerance, seed=self.solver_seed)


@dataclass
class Session:
    id: str
    original: WeightedGraph
    pipeline: LaplacianOperator
    basis: EigenBasis
    config: SessionConfig
    current_k: int = 2
    history: dict[int, ClusterReport] = field(default_factory=dict)
    status: str = ACTIVE
    accepted_k: int | None = None

    @classmethod
    def create(cls, graph: WeightedGraph, config: SessionConfig | None = None) -> "Session":
        config = config or SessionConfig()
        normalized = normalize_weights(graph)
        op = laplacian(normalized, config.variant)
        if op.component_count > 1 and not config.allow_disconnected:
            raise DisconnectedGraph(op.component_count)
        return cls(
            id=secrets.token_hex(16),
            original=graph,
            pipeline=op,
            basis=init_basis(op),
            config=config,
        )

    def step(self) -> ClusterReport:
        if self.status != ACTIVE:
            raise SessionClosed(f"session {self.id} is closed")
        K = self.current_k
        if K > self.pipeline.n:
            raise BasisFull(f"K={K} exceeds node count {self.pipeline.n}")
        while self.basis.size < K:
            next_eigenpair(self.basis, self.config.solver())
        V = self.basis.eigenvector_matrix(K)
        labels = kmeans_rows(
            V, K, seed=self.config.kmeans_seed, restarts=self.config.kmeans_restarts
        )
        report = evaluate(
            self.original, labels, K, self.basis.eigenvalues(K), self.pipeline
        )
        self.history[K] = report
        self.current_k = K + 1
        return report

    def accept(self, K: int) -> ClusterReport:
        if self.status != ACTIVE:
            raise SessionClosed(f"session {self.id} is closed")
        if K not in self.history:
            raise UnknownK(f"no report recorded at K={K}")
        self.status = ACCEPTED
        self.accepted_k = K
        return self.history[K]

    def metrics_history(self) -> list[ClusterReport]:
        return [self.history[k] for k in sorted(self.history)]

    def metrics_csv(self) -> str:
        lines = [clustering.CSV_HEADER]
        lines += [r.csv_row() for r in self.metrics_history()]
        return "\n".join(lines) + "\n"

    # --- persistence ---

    def save(self, path: str | Path) -> None:
        payload = {
            "id": self.id,
            "n": self.original.n,
            "edges": [[int(i), int(j), float(w)] for i, j, w in self.original.edges()],
            "config": {
                "variant": self.config.variant,
                "allow_disconnected": self.config.allow_disconnected,
                "solver_seed": self.config.solver_seed,
                "solver_tolerance": self.config.solver_tolerance,
                "kmeans_seed": self.config.kmeans_seed,
                "kmeans_restarts": self.config.kmeans_restarts,
            },
            "current_k": self.current_k,
            "status": self.status,
            "accepted_k": self.accepted_k,
            "basis_values": list(self.basis.values),
            "basis_vectors": [v.tolist() for v in self.basis.vectors],
            "history": [
                {
                    "K": r.K,
                    "labels": r.labels.tolist(),
                    "sizes": r.sizes.tolist(),
                    "modularity": r.modularity,
                    "scaled_nc": r.scaled_nc,
                    "scaled_median_size": r.scaled_median_size,
                    "scaled_max_size": r.scaled_max_size,
                    "scaled_spectrum_energy": r.scaled_spectrum_energy,
                }
                for r in self.metrics_history()
            ],
        }
        Path(path).write_text(json.dumps(payload))

    @classmethod
    def load(cls, path: str | Path) -> "Session":
        payload = json.loads(Path(path).read_text())
        graph = build_graph(payload["n"], [tuple(e) for e in payload["edges"]])
        config = SessionConfig(**payload["config"])
        session = cls.create(graph, config)
        session.id = payload["id"]
        session.current_k = payload["current_k"]
        session.status = payload["status"]
        session.accepted_k = payload["accepted_k"]
        session.basis.values = list(payload["basis_values"])
        session.basis.vectors = [np.asarray(v) for v in payload["basis_vectors"]]
        for r in payload["history"]:
            session.history[r["K"]] = ClusterReport(
                K=r["K"],
                labels=np.asarray(r["labels"], dtype=np.int64),
                sizes=np.asarray(r["sizes"], dtype=np.int64),
                modularity=r["modularity"],
                scaled_nc=r["scaled_nc"],
                scaled_median_size=r["scaled_median_size"],
                scaled_max_size=r["scaled_max_size"],
                scaled_spectrum_energy=r["scaled_spectrum_energy"],
            )
        return session
