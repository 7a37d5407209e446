import numpy as np
import pytest

from eigenstep.eigen import SolverConfig, dense_oracle, materialize
from eigenstep.errors import BasisFull, DimensionMismatch
from eigenstep.graph import NORMALIZED, UNNORMALIZED, build_graph, laplacian
from eigenstep.incremental import (
    InflatedOperator,
    inflated_apply,
    init_basis,
    next_eigenpair,
    sweep,
)
from eigenstep.ingest import erdos_renyi

from conftest import complete_graph, disjoint_cliques, path_graph


class TestInitBasis:
    def test_p3_connected(self, p3):
        basis = init_basis(laplacian(p3))
        assert basis.delta == 1
        np.testing.assert_allclose(basis.trivial[:, 0], np.ones(3) / np.sqrt(3))

    def test_disconnected_indicators(self, two_pairs):
        basis = init_basis(laplacian(two_pairs))
        assert basis.delta == 2
        np.testing.assert_allclose(basis.trivial[:, 0], [1, 1, 0, 0] / np.sqrt(2))
        np.testing.assert_allclose(basis.trivial[:, 1], [0, 0, 1, 1] / np.sqrt(2))

    def test_disconnected_normalized_uniform_strengths(self, two_pairs):
        basis = init_basis(laplacian(two_pairs, NORMALIZED))
        np.testing.assert_allclose(basis.trivial[:, 0], [1, 1, 0, 0] / np.sqrt(2))
        np.testing.assert_allclose(basis.trivial[:, 1], [0, 0, 1, 1] / np.sqrt(2))

    def test_connected_normalized_sqrt_strength(self, p3):
        basis = init_basis(laplacian(p3, NORMALIZED))
        s = np.array([1.0, 2.0, 1.0])
        np.testing.assert_allclose(basis.trivial[:, 0], np.sqrt(s) / 2.0)

    def test_trivial_block_in_null_space(self):
        g = erdos_renyi(30, 0.1, seed=13)  # possibly disconnected at this p
        for variant in (UNNORMALIZED,):
            op = laplacian(g, variant)
            basis = init_basis(op)
            for j in range(basis.delta):
                assert np.linalg.norm(op.apply(basis.trivial[:, j])) <= 1e-10


class TestInflatedApply:
    def test_trivial_vector_maps_to_zero(self, p3):
        basis = init_basis(laplacian(p3))
        x = np.ones(3) / np.sqrt(3)
        np.testing.assert_allclose(inflated_apply(basis, x), 0.0, atol=1e-12)

    def test_p3_second_eigenvector(self, p3):
        # oracle: lambda_2 = 1, s = 4, so the shifted value is -3
        basis = init_basis(laplacian(p3))
        x = np.array([1.0, 0.0, -1.0]) / np.sqrt(2)
        np.testing.assert_allclose(inflated_apply(basis, x), -3.0 * x, atol=1e-12)

    def test_disconnected_third_eigenvector(self, two_pairs):
        # oracle on the 4x4: lambda_3 = 2, s = 4
        basis = init_basis(laplacian(two_pairs))
        x = np.array([1.0, -1.0, 0.0, 0.0]) / np.sqrt(2)
        np.testing.assert_allclose(inflated_apply(basis, x), -2.0 * x, atol=1e-12)

    def test_dimension_mismatch(self, p3):
        basis = init_basis(laplacian(p3))
        with pytest.raises(DimensionMismatch):
            inflated_apply(basis, np.ones(4))

    def test_symmetry(self):
        g = erdos_renyi(25, 0.2, seed=3)
        basis, _ = sweep(laplacian(g), 4)
        op = InflatedOperator(basis)
        rng = np.random.default_rng(0)
        for _ in range(20):
            x, y = rng.standard_normal((2, g.n))
            assert abs(op.apply(x) @ y - x @ op.apply(y)) <= (
                1e-12 * np.linalg.norm(x) * np.linalg.norm(y) * basis.shift
            )


class TestNextEigenpair:
    def test_p3_first_step(self, p3):
        basis = init_basis(laplacian(p3))
        pair, _ = next_eigenpair(basis)
        assert pair.value == pytest.approx(1.0, abs=1e-9)
        np.testing.assert_allclose(
            pair.vector, np.array([1.0, 0.0, -1.0]) / np.sqrt(2), atol=1e-8
        )

    def test_p3_second_step(self, p3):
        basis = init_basis(laplacian(p3))
        next_eigenpair(basis)
        pair, _ = next_eigenpair(basis)
        assert pair.value == pytest.approx(3.0, abs=1e-9)
        np.testing.assert_allclose(
            pair.vector, np.array([-1.0, 2.0, -1.0]) / np.sqrt(6), atol=1e-8
        )

    def test_k3_degenerate_residual_only(self, k3):
        op = laplacian(k3)
        basis = init_basis(op)
        pair, _ = next_eigenpair(basis)
        assert pair.value == pytest.approx(3.0, abs=1e-9)
        res = np.linalg.norm(op.apply(pair.vector) - pair.value * pair.vector)
        assert res <= 1e-9 * op.total_strength

    def test_basis_full(self, p3):
        basis, _ = sweep(laplacian(p3), 3)
        with pytest.raises(BasisFull):
            next_eigenpair(basis)


class TestSweep:
    def test_p3_full_spectrum(self, p3):
        basis, _ = sweep(laplacian(p3), 3)
        np.testing.assert_allclose(basis.eigenvalues(), [0.0, 1.0, 3.0], atol=1e-9)

    def test_er_matches_oracle(self):
        g = erdos_renyi(50, 0.2, seed=21)
        op = laplacian(g)
        basis, _ = sweep(op, 10)
        oracle = dense_oracle(op)
        want = np.array([p.value for p in oracle[:10]])
        np.testing.assert_allclose(basis.eigenvalues(), want, atol=1e-8)
        # vectors match up to sign where the local eigengap is clear
        vals = np.array([p.value for p in oracle])
        for i in range(10):
            gap = min(
                vals[i] - vals[i - 1] if i > 0 else np.inf,
                vals[i + 1] - vals[i],
            )
            if gap > 1e-6:
                got = basis.eigenvector_matrix()[:, i]
                assert np.max(np.abs(got - oracle[i].vector)) <= 1e-6

    def test_disconnected_three_components(self):
        g = disjoint_cliques([3, 4, 3])
        op = laplacian(g)
        basis, _ = sweep(op, 5)
        oracle = np.array([p.value for p in dense_oracle(op)[:5]])
        np.testing.assert_allclose(basis.eigenvalues()[:3], 0.0, atol=1e-12)
        np.testing.assert_allclose(basis.eigenvalues(), oracle, atol=1e-8)

    @pytest.mark.parametrize("variant", [UNNORMALIZED, NORMALIZED])
    def test_orthogonality_preserved(self, variant):
        g = erdos_renyi(40, 0.2, seed=17)
        basis, _ = sweep(laplacian(g, variant), 8)
        V = basis.eigenvector_matrix()
        assert np.max(np.abs(V.T @ V - np.eye(8))) <= 1e-8

    def test_monotone_and_bounded(self):
        g = erdos_renyi(35, 0.25, seed=19)
        for variant, bound in ((UNNORMALIZED, None), (NORMALIZED, 2.0)):
            op = laplacian(g, variant)
            basis, _ = sweep(op, 10)
            vals = basis.eigenvalues()
            assert (np.diff(vals) >= -1e-9).all()
            hi = op.total_strength if bound is None else bound
            assert vals.min() >= -1e-10
            assert vals.max() <= hi + 1e-10


class TestSpectrumStructure:
    """Dense checks of the inflation identities at desk scale."""

    @pytest.mark.parametrize("variant", [UNNORMALIZED, NORMALIZED])
    def test_inflated_operator_spectrum(self, variant):
        g = erdos_renyi(30, 0.25, seed=24)
        op = laplacian(g, variant)
        oracle = np.array([p.value for p in dense_oracle(op)])
        basis, _ = sweep(op, 5)
        dense = materialize(InflatedOperator(basis))
        got = np.linalg.eigvalsh(dense)
        want = np.sort(np.concatenate([np.zeros(5), oracle[5:] - basis.shift]))
        np.testing.assert_allclose(got, want, atol=1e-8)
        assert (np.abs(got) <= 1e-8).sum() == 5

    def test_connected_rank_one_inflation(self):
        # adding (s/n) * ones * ones^T moves the zero eigenvalue to s
        g = erdos_renyi(25, 0.3, seed=29)
        op = laplacian(g)
        s, n = op.total_strength, g.n
        dense = op.to_dense() + (s / n) * np.ones((n, n))
        got = np.linalg.eigvalsh(dense)
        oracle = np.array([p.value for p in dense_oracle(op)])
        want = np.sort(np.concatenate([oracle[1:], [s]]))
        np.testing.assert_allclose(got, want, atol=1e-8)

    def test_normalized_rank_one_inflation_top_value_two(self):
        g = erdos_renyi(25, 0.3, seed=31)
        op = laplacian(g, NORMALIZED)
        sqrt_s = np.sqrt(op.profile.strengths)
        dense = op.to_dense() + (2.0 / op.total_strength) * np.outer(sqrt_s, sqrt_s)
        got = np.linalg.eigvalsh(dense)
        oracle = np.array([p.value for p in dense_oracle(op)])
        want = np.sort(np.concatenate([oracle[1:], [2.0]]))
        np.testing.assert_allclose(got, want, atol=1e-8)

    def test_disconnected_block_inflation(self):
        g = disjoint_cliques([4, 5])
        op = laplacian(g)
        basis = init_basis(op)
        V = basis.trivial
        dense = op.to_dense() + op.total_strength * (V @ V.T)
        got = np.linalg.eigvalsh(dense)
        oracle = np.array([p.value for p in dense_oracle(op)])
        want = np.sort(
            np.concatenate([oracle[2:], [op.total_strength, op.total_strength]])
        )
        np.testing.assert_allclose(got, want, atol=1e-8)

    def test_step_does_not_mutate_recorded_pairs(self):
        g = erdos_renyi(30, 0.2, seed=37)
        basis, _ = sweep(laplacian(g), 4)
        frozen_vals = basis.eigenvalues().copy()
        frozen_vecs = basis.eigenvector_matrix().copy()
        next_eigenpair(basis)
        assert (basis.eigenvalues()[:4] == frozen_vals).all()
        assert (basis.eigenvector_matrix()[:, :4] == frozen_vecs).all()
