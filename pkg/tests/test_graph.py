import numpy as np
import pytest

from eigenstep.errors import (
    DuplicateEdge,
    IndexOutOfRange,
    NonpositiveWeight,
    SelfLoop,
    ZeroStrengthNode,
)
from eigenstep.graph import (
    NORMALIZED,
    UNNORMALIZED,
    build_graph,
    connected_components,
    laplacian,
    normalize_weights,
    strengths,
    trace_of_laplacian,
)
from eigenstep.eigen import dense_oracle
from eigenstep.ingest import erdos_renyi

from conftest import complete_graph, disjoint_cliques, path_graph


class TestBuildGraph:
    def test_path_graph(self):
        g = build_graph(3, [(0, 1, 1.0), (1, 2, 1.0)])
        assert g.n == 3 and g.m == 2
        assert list(g.edges()) == [(0, 1, 1.0), (1, 2, 1.0)]

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoop):
            build_graph(2, [(0, 0, 1.0)])

    def test_duplicate_rejected(self):
        with pytest.raises(DuplicateEdge):
            build_graph(4, [(0, 1, 2.5), (0, 1, 1.0)])

    def test_duplicate_reversed_orientation(self):
        with pytest.raises(DuplicateEdge):
            build_graph(4, [(0, 1, 2.5), (1, 0, 1.0)])

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            build_graph(2, [(0, 2, 1.0)])

    def test_nonpositive_weight(self):
        with pytest.raises(NonpositiveWeight):
            build_graph(2, [(0, 1, 0.0)])
        with pytest.raises(NonpositiveWeight):
            build_graph(2, [(0, 1, -1.0)])

    def test_canonical_orientation(self):
        g = build_graph(3, [(2, 0, 1.5)])
        assert list(g.edges()) == [(0, 2, 1.5)]


class TestComponents:
    def test_connected_path(self, p3):
        delta, labels = connected_components(p3)
        assert delta == 1
        assert labels.tolist() == [0, 0, 0]

    def test_two_components(self, two_pairs):
        delta, labels = connected_components(two_pairs)
        assert delta == 2
        assert labels.tolist() == [0, 0, 1, 1]

    def test_isolated_nodes(self):
        g = build_graph(3, [])
        delta, labels = connected_components(g)
        assert delta == 3
        assert labels.tolist() == [0, 1, 2]

    def test_label_order_by_smallest_node(self):
        # component containing node 0 gets label 0 regardless of edge order
        g = build_graph(5, [(3, 4, 1.0), (0, 2, 1.0)])
        delta, labels = connected_components(g)
        assert delta == 3
        assert labels.tolist() == [0, 1, 0, 2, 2]


class TestStrengths:
    def test_path(self, p3):
        prof = strengths(p3)
        assert prof.strengths.tolist() == [1.0, 2.0, 1.0]
        assert prof.total == 4.0

    def test_triangle(self, k3):
        prof = strengths(k3)
        assert prof.strengths.tolist() == [2.0, 2.0, 2.0]
        assert prof.total == 6.0

    def test_weighted_edge(self):
        g = build_graph(2, [(0, 1, 3.5)])
        prof = strengths(g)
        assert prof.strengths.tolist() == [3.5, 3.5]
        assert prof.total == 7.0

    def test_total_is_twice_edge_weight_sum(self):
        g = erdos_renyi(30, 0.2, seed=3)
        prof = strengths(g)
        assert prof.total == pytest.approx(2.0 * g.weights.sum(), rel=1e-12)


class TestNormalizeWeights:
    def test_single_edge(self):
        g = build_graph(2, [(0, 1, 4.0)])
        gn = normalize_weights(g)
        assert gn.weights.tolist() == [1.0]

    def test_triangle(self, k3):
        gn = normalize_weights(k3)
        np.testing.assert_allclose(gn.weights, 0.5)

    def test_isolated_node_rejected(self):
        g = build_graph(3, [(0, 1, 1.0)])
        with pytest.raises(ZeroStrengthNode):
            normalize_weights(g)


class TestLaplacianOperator:
    def test_path_first_basis_vector(self, p3):
        op = laplacian(p3, UNNORMALIZED)
        np.testing.assert_allclose(op.apply([1.0, 0.0, 0.0]), [1.0, -1.0, 0.0])

    def test_ones_in_null_space(self):
        g = erdos_renyi(25, 0.3, seed=0)
        op = laplacian(g, UNNORMALIZED)
        s = op.total_strength
        assert np.linalg.norm(op.apply(np.ones(g.n))) <= 1e-12 * s

    def test_sqrt_strength_null_normalized(self, k3):
        op = laplacian(k3, NORMALIZED)
        np.testing.assert_allclose(op.apply(np.ones(3)), 0.0, atol=1e-14)

    def test_normalized_null_vector_random_graph(self):
        g = erdos_renyi(30, 0.3, seed=1)
        op = laplacian(g, NORMALIZED)
        v = np.sqrt(op.profile.strengths)
        assert np.linalg.norm(op.apply(v)) <= 1e-12 * op.total_strength

    def test_normalized_rejects_isolated(self):
        g = build_graph(3, [(0, 1, 1.0)])
        with pytest.raises(ZeroStrengthNode):
            laplacian(g, NORMALIZED)

    @pytest.mark.parametrize("variant", [UNNORMALIZED, NORMALIZED])
    def test_symmetry(self, variant):
        g = erdos_renyi(20, 0.3, seed=2)
        op = laplacian(g, variant)
        rng = np.random.default_rng(0)
        for _ in range(100):
            x = rng.standard_normal(g.n)
            y = rng.standard_normal(g.n)
            lhs = op.apply(x) @ y
            rhs = x @ op.apply(y)
            assert abs(lhs - rhs) <= 1e-12 * np.linalg.norm(x) * np.linalg.norm(y)

    @pytest.mark.parametrize("variant", [UNNORMALIZED, NORMALIZED])
    def test_dense_matches_apply(self, variant):
        g = erdos_renyi(15, 0.4, seed=5)
        op = laplacian(g, variant)
        dense = op.to_dense()
        rng = np.random.default_rng(1)
        x = rng.standard_normal(g.n)
        np.testing.assert_allclose(op.apply(x), dense @ x, atol=1e-12)

    def test_positive_semidefinite_desk_scale(self):
        for seed in range(3):
            g = erdos_renyi(40, 0.15, seed=seed)
            for variant in (UNNORMALIZED,):
                op = laplacian(g, variant)
                vals = np.array([p.value for p in dense_oracle(op)])
                assert vals.min() >= -1e-10

    def test_component_count_matches_zero_multiplicity(self):
        g = disjoint_cliques([4, 5, 3])
        op = laplacian(g, UNNORMALIZED)
        vals = np.array([p.value for p in dense_oracle(op)])
        assert (np.abs(vals) <= 1e-8).sum() == op.component_count == 3


class TestTrace:
    def test_path_unnormalized(self, p3):
        assert trace_of_laplacian(laplacian(p3, UNNORMALIZED)) == 4.0

    def test_k3_normalized(self, k3):
        assert trace_of_laplacian(laplacian(k3, NORMALIZED)) == 3.0

    @pytest.mark.parametrize("variant", [UNNORMALIZED, NORMALIZED])
    def test_trace_equals_eigenvalue_sum(self, variant):
        g = erdos_renyi(40, 0.2, seed=7)
        op = laplacian(g, variant)
        vals = np.array([p.value for p in dense_oracle(op)])
        assert trace_of_laplacian(op) == pytest.approx(vals.sum(), rel=1e-9)
