import numpy as np
import pytest

from eigenstep.graph import build_graph


def path_graph(n, w=1.0):
    return build_graph(n, [(i, i + 1, w) for i in range(n - 1)])


def cycle_graph(n, w=1.0):
    edges = [(i, i + 1, w) for i in range(n - 1)] + [(0, n - 1, w)]
    return build_graph(n, edges)


def complete_graph(n, w=1.0):
    return build_graph(n, [(i, j, w) for i in range(n) for j in range(i + 1, n)])


def disjoint_cliques(sizes, w=1.0):
    """Union of complete graphs, one per entry of sizes."""
    edges = []
    offset = 0
    for sz in sizes:
        edges += [(offset + i, offset + j, w) for i in range(sz) for j in range(i + 1, sz)]
        offset += sz
    return build_graph(offset, edges)


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def two_pairs():
    # two disjoint edges: {0,1} and {2,3}
    return build_graph(4, [(0, 1, 1.0), (2, 3, 1.0)])


class DiagonalOperator:
    """Test operator: diagonal matrix given as a vector."""

    def __init__(self, diag):
        self.diag = np.asarray(diag, dtype=np.float64)
        self.n = len(self.diag)

    def apply(self, x):
        return self.diag * x

    def to_dense(self):
        return np.diag(self.diag)


class DenseSymmetricOperator:
    def __init__(self, A):
        A = np.asarray(A, dtype=np.float64)
        self.A = (A + A.T) / 2.0
        self.n = A.shape[0]

    def apply(self, x):
        return self.A @ x

    def to_dense(self):
        return self.A.copy()


def random_symmetric(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    return DenseSymmetricOperator(A + A.T)
