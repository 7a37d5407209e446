"""K-means on eigenvector rows and the five clustering quality metrics.

Weight conventions follow strength-sum semantics: W(C, C) counts internal
edges twice so that W(C, V) = W(C, C) + W(C, C-bar) and the cluster volumes
sum to the total strength s = W(V, V).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import KTooLarge, ZeroVolumeCluster
from .graph import LaplacianOperator, WeightedGraph, strengths, trace_of_laplacian

CSV_HEADER = "K,modularity,scaled_nc,scaled_median,scaled_max,scaled_energy"


@dataclass
class ClusterReport:
    K: int
    labels: np.ndarray
    sizes: np.ndarray
    modularity: float
    scaled_nc: float
    scaled_median_size: float
    scaled_max_size: float
    scaled_spectrum_energy: float

    def csv_row(self) -> str:
        return (
            f"{self.K},{self.modularity!r},{self.scaled_nc!r},"
            f"{self.scaled_median_size!r},{self.scaled_max_size!r},"
            f"{self.scaled_spectrum_energy!r}"
        )


def _kmeans_pp_init(X: np.ndarray, K: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((K, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for k in range(1, K):
        total = d2.sum()
        if total <= 0:
            centers[k] = X[rng.integers(n)]
        else:
            centers[k] = X[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, ((X - centers[k]) ** 2).sum(axis=1))
    return centers


def _lloyd(X: np.ndarray, centers: np.ndarray, max_iter: int) -> tuple[np.ndarray, float]:
    n, K = X.shape[0], centers.shape[0]
    labels = np.full(n, -1)
    for _ in range(max_iter):
        dist = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = dist.argmin(axis=1)
        # empty-cluster repair: seize the point farthest from its center
        # inside the largest cluster
        for k in range(K):
            if (new_labels == k).any():
                continue
            sizes = np.bincount(new_labels, minlength=K)
            big = int(sizes.argmax())
            members = np.flatnonzero(new_labels == big)
            far = members[dist[members, big].argmax()]
            new_labels[far] = k
            centers[k] = X[far]
        if (new_labels == labels).all():
            break
        labels = new_labels
        for k in range(K):
            centers[k] = X[labels == k].mean(axis=0)
    dist = ((X - centers[labels]) ** 2).sum()
    return labels, float(dist)


def kmeans_rows(
    V: np.ndarray, K: int, seed: int = 0, restarts: int = 10, max_iter: int = 100
) -> np.ndarray:
    """Cluster the rows of V into K groups; best of `restarts` seeded runs."""
    X = np.asarray(V, dtype=np.float64)
    n = X.shape[0]
    if K > n:
        raise KTooLarge(f"K={K} exceeds number of rows {n}")
    if K == 1:
        return np.zeros(n, dtype=np.int64)
    rng = np.random.default_rng(seed)
    best_labels, best_cost = None, np.inf
    for _ in range(restarts):
        centers = _kmeans_pp_init(X, K, rng)
        labels, cost = _lloyd(X, centers.copy(), max_iter)
        if cost < best_cost - 1e-12:
            best_labels, best_cost = labels, cost
    return best_labels.astype(np.int64)


def _cluster_weights(
    g: WeightedGraph, labels: np.ndarray, K: int
) -> tuple[np.ndarray, np.ndarray, float]:
    """(internal weight with both orientations, volume, total strength) per cluster."""
    labels = np.asarray(labels)
    prof = strengths(g)
    vol = np.zeros(K)
    np.add.at(vol, labels, prof.strengths)
    internal = np.zeros(K)
    same = labels[g.rows] == labels[g.cols]
    np.add.at(internal, labels[g.rows[same]], 2.0 * g.weights[same])
    return internal, vol, prof.total


def modularity(g: WeightedGraph, labels: np.ndarray) -> float:
    K = int(np.max(labels)) + 1
    internal, vol, s = _cluster_weights(g, labels, K)
    return float(np.sum(internal / s - (vol / s) ** 2))


def scaled_normalized_cut(g: WeightedGraph, labels: np.ndarray, K: int) -> float:
    internal, vol, _ = _cluster_weights(g, labels, K)
    if (vol == 0).any():
        raise ZeroVolumeCluster(f"cluster {int(np.flatnonzero(vol == 0)[0])} has zero volume")
    cut = vol - internal
    return float(np.sum(cut / vol) / K)


def scaled_sizes(labels: np.ndarray, n: int) -> tuple[float, float]:
    """(lower-median cluster size / n, max cluster size / n)."""
    sizes = np.sort(np.bincount(np.asarray(labels)))
    median = sizes[(len(sizes) - 1) // 2]
    return float(median) / n, float(sizes[-1]) / n


def scaled_spectrum_energy(eigenvalues: np.ndarray, op: LaplacianOperator) -> float:
    return float(np.sum(eigenvalues) / trace_of_laplacian(op))


def evaluate(
    g: WeightedGraph,
    labels: np.ndarray,
    K: int,
    eigenvalues: np.ndarray,
    op: LaplacianOperator,
) -> ClusterReport:
    """Assemble the five metrics into one report.

    Metrics over edges/volumes use the graph g (the original input weights);
    the spectrum energy uses the eigenvalues and trace of the pipeline
    Laplacian op.
    """
    labels = np.asarray(labels, dtype=np.int64)
    med, mx = scaled_sizes(labels, g.n)
    return ClusterReport(
        K=K,
        labels=labels,
        sizes=np.bincount(labels, minlength=K),
        modularity=modularity(g, labels),
        scaled_nc=scaled_normalized_cut(g, labels, K),
        scaled_median_size=med,
        scaled_max_size=mx,
        scaled_spectrum_energy=scaled_spectrum_energy(np.asarray(eigenvalues)[:K], op),
    )
