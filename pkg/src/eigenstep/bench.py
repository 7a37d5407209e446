"""Timing harness: sequential K sweeps under the three eigensolver routes.

Timings are wall-clock (monotonic), one warm-up run is discarded, and BLAS
internal threading is pinned to one thread so runs are comparable.
Assertions about timing live in the tests and are trend inequalities only.
"""

from __future__ import annotations

import csv
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover - threadpoolctl ships with scikit-learn
    from contextlib import nullcontext

    def threadpool_limits(limits=None):
        return nullcontext()

from .eigen import SolverConfig, batch_smallest, dense_oracle
from .errors import EigenstepError
from .graph import LaplacianOperator, WeightedGraph, laplacian
from .incremental import init_basis, next_eigenpair
from .lanczos import SmallestViaLanczos

METHODS = ("incremental", "lanczos-io", "batch")
VALIDATION_LIMIT = 200  # dense-oracle validation only below this size
AGREEMENT_TOL = 1e-6


@dataclass
class BenchRecord:
    method: str
    tag: str
    n: int
    K: int
    trial: int
    zaug: int | None
    step_seconds: float
    cumulative_seconds: float
    matvecs: int
    stored_vectors: int
    seed: int
    agrees: bool
    error: str | None = None


class CountingLaplacian:
    """Delegating wrapper that counts matvecs on a LaplacianOperator."""

    def __init__(self, op: LaplacianOperator):
        self._op = op
        self.count = 0

    def apply(self, x):
        self.count += 1
        return self._op.apply(x)

    def __getattr__(self, name):
        return getattr(self._op, name)


def _incremental_series(op, k_max, seed):
    basis = init_basis(op)
    out = []
    for K in range(2, k_max + 1):
        counted = CountingLaplacian(op)
        basis.operator = counted
        t0 = time.perf_counter()
        while basis.size < K:
            next_eigenpair(basis, SolverConfig(seed=seed))
        dt = time.perf_counter() - t0
        basis.operator = op
        out.append((K, dt, counted.count, basis.size, basis.eigenvalues(K)))
    return out


def _batch_series(op, k_max, seed):
    out = []
    for K in range(2, k_max + 1):
        counted = CountingLaplacian(op)
        t0 = time.perf_counter()
        pairs = batch_smallest(counted, K, SolverConfig(seed=seed))
        dt = time.perf_counter() - t0
        out.append((K, dt, counted.count, K, np.array([p.value for p in pairs])))
    return out


def _lanczos_series(op, k_max, seed, z_ini=20, z_aug=10):
    counted = CountingLaplacian(op)
    solver = SmallestViaLanczos(counted, z_ini=z_ini, z_aug=z_aug, seed=seed)
    out = []
    last = counted.count
    for K in range(2, k_max + 1):
        t0 = time.perf_counter()
        pairs = solver.compute(K)
        dt = time.perf_counter() - t0
        out.append(
            (K, dt, counted.count - last, solver.stored_vectors,
             np.array([p.value for p in pairs]))
        )
        last = counted.count
    return out


_RUNNERS = {
    "incremental": _incremental_series,
    "batch": _batch_series,
    "lanczos-io": _lanczos_series,
}


def run_sweep(
    graph: WeightedGraph,
    methods: tuple[str, ...] = METHODS,
    k_max: int = 10,
    trials: int = 5,
    seed: int = 0,
    tag: str = "",
    variant: str = "unnormalized",
    warmup: bool = True,
) -> list[BenchRecord]:
    for m in methods:
        if m not in _RUNNERS:
            raise ValueError(f"unknown method {m!r}")
    op = laplacian(graph, variant)
    oracle_vals = None
    if graph.n <= VALIDATION_LIMIT:
        oracle_vals = np.array([p.value for p in dense_oracle(op)])[:k_max]
    records: list[BenchRecord] = []
    with threadpool_limits(limits=1):
        if warmup:
            for m in methods:
                try:
                    _RUNNERS[m](op, min(3, k_max), seed)
                except EigenstepError:
                    pass
        for trial in range(trials):
            series = {}
            for m in methods:
                try:
                    series[m] = _RUNNERS[m](op, k_max, seed + trial)
                except EigenstepError as err:
                    records.append(
                        BenchRecord(
                            method=m, tag=tag, n=graph.n, K=-1, trial=trial,
                            zaug=None, step_seconds=0.0, cumulative_seconds=0.0,
                            matvecs=0, stored_vectors=0, seed=seed + trial,
                            agrees=False, error=str(err),
                        )
                    )
            for m, rows in series.items():
                cum = 0.0
                for K, dt, matvecs, stored, vals in rows:
                    cum += dt
                    agrees = True
                    for other, orows in series.items():
                        if other == m:
                            continue
                        ovals = next(r[4] for r in orows if r[0] == K)
                        if np.max(np.abs(ovals[:K] - vals[:K])) > AGREEMENT_TOL:
                            agrees = False
                    if oracle_vals is not None:
                        if np.max(np.abs(vals[:K] - oracle_vals[:K])) > AGREEMENT_TOL:
                            agrees = False
                    records.append(
                        BenchRecord(
                            method=m, tag=tag, n=graph.n, K=K, trial=trial,
                            zaug=None, step_seconds=dt, cumulative_seconds=cum,
                            matvecs=matvecs, stored_vectors=stored,
                            seed=seed + trial, agrees=agrees,
                        )
                    )
    return records


def zaug_sensitivity(
    graph: WeightedGraph,
    k_max: int,
    zaug_values: tuple[int, ...],
    trials: int = 5,
    seed: int = 0,
    tag: str = "",
    variant: str = "unnormalized",
) -> list[BenchRecord]:
    if not zaug_values:
        raise ValueError("zaug_values must be nonempty")
    op = laplacian(graph, variant)
    records: list[BenchRecord] = []
    with threadpool_limits(limits=1):
        for trial in range(trials):
            batch_rows = _batch_series(op, k_max, seed + trial)
            cum = 0.0
            for K, dt, matvecs, stored, _ in batch_rows:
                cum += dt
                records.append(
                    BenchRecord(
                        method="batch", tag=tag, n=graph.n, K=K, trial=trial,
                        zaug=None, step_seconds=dt, cumulative_seconds=cum,
                        matvecs=matvecs, stored_vectors=stored,
                        seed=seed + trial, agrees=True,
                    )
                )
            for zaug in zaug_values:
                rows = _lanczos_series(op, k_max, seed + trial, z_aug=zaug)
                cum = 0.0
                for K, dt, matvecs, stored, vals in rows:
                    cum += dt
                    bvals = next(r[4] for r in batch_rows if r[0] == K)
                    agrees = bool(np.max(np.abs(vals[:K] - bvals[:K])) <= AGREEMENT_TOL)
                    records.append(
                        BenchRecord(
                            method="lanczos-io", tag=tag, n=graph.n, K=K,
                            trial=trial, zaug=zaug, step_seconds=dt,
                            cumulative_seconds=cum, matvecs=matvecs,
                            stored_vectors=stored, seed=seed + trial,
                            agrees=agrees,
                        )
                    )
    return records


def write_csv(records: list[BenchRecord], path: str | Path) -> None:
    fields = list(asdict(records[0]).keys()) if records else [
        f.name for f in BenchRecord.__dataclass_fields__.values()
    ]
    with Path(path).open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for rec in records:
            writer.writerow(asdict(rec))
