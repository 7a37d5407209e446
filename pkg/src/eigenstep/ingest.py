"""Graph and point-cloud loading plus synthetic graph generators."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import KOutOfRange, ParseError
from .graph import WeightedGraph, build_graph


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray  # n x d

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 2:
            raise ValueError("point cloud must be a 2-D array with n >= 2 rows")
        if not np.isfinite(pts).all():
            raise ValueError("point cloud contains non-finite entries")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]


def _parse_float(tok: str, line_no: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(line_no, f"bad number {tok!r}") from None


def _parse_int(tok: str, line_no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(line_no, f"bad index {tok!r}") from None


def load_edge_list(path: str | Path) -> WeightedGraph:
    """Read `i j w` lines (0-based); optional `n m` header; `#` comments.

    Matrix Market coordinate files (1-based, lower triangle) are detected by
    their `%%MatrixMarket` banner and handled too.
    """
    path = Path(path)
    with path.open() as fh:
        first = fh.readline()
        if first.startswith("%%MatrixMarket"):
            return _load_matrix_market(first, fh)
        lines = [first] + fh.readlines()

    edges: list[tuple[int, int, float]] = []
    n_header: int | None = None
    seen_data = False
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) == 2 and not seen_data:
            n_header = _parse_int(toks[0], line_no)
            seen_data = True
            continue
        if len(toks) != 3:
            raise ParseError(line_no, f"expected `i j w`, got {len(toks)} tokens")
        seen_data = True
        i = _parse_int(toks[0], line_no)
        j = _parse_int(toks[1], line_no)
        w = _parse_float(toks[2], line_no)
        edges.append((i, j, w))
    n = n_header if n_header is not None else (
        1 + max((max(i, j) for i, j, _ in edges), default=-1)
    )
    return build_graph(n, edges)


def _load_matrix_market(header: str, fh) -> WeightedGraph:
    toks = header.split()
    if len(toks) < 5 or toks[1] != "matrix" or toks[2] != "coordinate":
        raise ParseError(1, "unsupported MatrixMarket header")
    field, symmetry = toks[3], toks[4]
    if field not in ("real", "integer", "pattern"):
        raise ParseError(1, f"unsupported field {field!r}")
    if symmetry not in ("symmetric", "general"):
        raise ParseError(1, f"unsupported symmetry {symmetry!r}")
    size_seen = False
    n = 0
    edges: list[tuple[int, int, float]] = []
    for line_no, raw in enumerate(fh, start=2):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        toks = line.split()
        if not size_seen:
            if len(toks) != 3:
                raise ParseError(line_no, "expected `rows cols nnz` size line")
            rows = _parse_int(toks[0], line_no)
            cols = _parse_int(toks[1], line_no)
            if rows != cols:
                raise ParseError(line_no, "matrix must be square")
            n = rows
            size_seen = True
            continue
        want = 2 if field == "pattern" else 3
        if len(toks) != want:
            raise ParseError(line_no, f"expected {want} tokens")
        i = _parse_int(toks[0], line_no) - 1
        j = _parse_int(toks[1], line_no) - 1
        w = 1.0 if field == "pattern" else _parse_float(toks[2], line_no)
        edges.append((i, j, w))
    if not size_seen:
        raise ParseError(2, "missing size line")
    return build_graph(n, edges)


def write_edge_list(g: WeightedGraph, path: str | Path) -> None:
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for i, j, w in g.edges():
            fh.write(f"{i} {j} {w!r}\n")


def load_points_csv(path: str | Path) -> PointCloud:
    """One point per row, comma- or whitespace-separated coordinates."""
    rows: list[list[float]] = []
    with Path(path).open() as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.replace(",", " ").split()
            rows.append([_parse_float(t, line_no) for t in toks])
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ParseError(0, "inconsistent coordinate count across rows")
    return PointCloud(points=np.asarray(rows))


def knn_graph(
    pc: PointCloud, k: int, mode: str = "unit", sigma: float | None = None
) -> WeightedGraph:
    """Union-symmetrized k-nearest-neighbor graph over Euclidean distance.

    Distance ties are broken by lower index, so the construction is
    deterministic even for duplicate points.
    """
    n = pc.n
    if not (1 <= k < n):
        raise KOutOfRange(f"k={k} out of range for n={n}")
    if mode not in ("unit", "gaussian"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "gaussian" and not (sigma and sigma > 0):
        raise ValueError("gaussian mode requires sigma > 0")
    X = pc.points
    pair_set: set[tuple[int, int]] = set()
    chunk = max(1, int(2e7) // max(n, 1))
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        d2 = ((X[lo:hi, None, :] - X[None, :, :]) ** 2).sum(axis=2)
        d2[np.arange(hi - lo), np.arange(lo, hi)] = np.inf  # no self-edges
        # stable argsort on distance keeps lower indices first on ties
        nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
        for r, row in enumerate(nearest, start=lo):
            for j in row:
                j = int(j)
                pair_set.add((r, j) if r < j else (j, r))
    edges = []
    for i, j in sorted(pair_set):
        if mode == "unit":
            w = 1.0
        else:
            w = float(np.exp(-((X[i] - X[j]) ** 2).sum() / (2.0 * sigma**2)))
        edges.append((i, j, w))
    return build_graph(n, edges)


def erdos_renyi(n: int, p: float, seed: int = 0) -> WeightedGraph:
    """Unit-weight G(n, p); each unordered pair included with probability p."""
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p={p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(len(iu)) < p
    edges = [(int(i), int(j), 1.0) for i, j in zip(iu[mask], ju[mask])]
    return build_graph(n, edges)


def two_moons(n: int, noise: float = 0.05, seed: int = 0) -> tuple[PointCloud, np.ndarray]:
    """Two interleaved half-circles with Gaussian noise; returns (cloud, labels)."""
    rng = np.random.default_rng(seed)
    n_top = n // 2
    n_bot = n - n_top
    t_top = rng.uniform(0.0, np.pi, n_top)
    t_bot = rng.uniform(0.0, np.pi, n_bot)
    top = np.column_stack([np.cos(t_top), np.sin(t_top)])
    bot = np.column_stack([1.0 - np.cos(t_bot), 0.5 - np.sin(t_bot)])
    pts = np.vstack([top, bot]) + rng.normal(scale=noise, size=(n, 2))
    labels = np.concatenate([np.zeros(n_top, dtype=np.int64), np.ones(n_bot, dtype=np.int64)])
    return PointCloud(points=pts), labels
