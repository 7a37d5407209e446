import itertools

import numpy as np
import pytest

from eigenstep.clustering import modularity
from eigenstep.eigen import SolverConfig, batch_smallest
from eigenstep.errors import DisconnectedGraph, SessionClosed, UnknownK
from eigenstep.graph import laplacian, normalize_weights
from eigenstep.ingest import erdos_renyi
from eigenstep.session import Session, SessionConfig

from conftest import disjoint_cliques, path_graph


class TestCreate:
    def test_pipeline_is_strength_normalized(self, p3):
        session = Session.create(p3)
        # pipeline total strength computed on the normalized graph
        gn = normalize_weights(p3)
        expected = laplacian(gn).total_strength
        assert session.pipeline.total_strength == pytest.approx(expected, rel=1e-12)
        assert session.current_k == 2
        assert session.metrics_history() == []

    def test_disconnected_guard_names_delta(self):
        g = disjoint_cliques([3, 3, 4])
        with pytest.raises(DisconnectedGraph) as exc:
            Session.create(g)
        assert exc.value.component_count == 3

    def test_disconnected_mode_starts_with_trivial_block(self):
        g = disjoint_cliques([3, 3, 4])
        session = Session.create(g, SessionConfig(allow_disconnected=True))
        assert session.basis.delta == 3
        assert session.basis.size == 3


class TestStep:
    def test_first_step_p3(self, p3):
        session = Session.create(p3)
        report = session.step()
        assert report.K == 2
        sizes = sorted(report.sizes.tolist())
        assert sizes in ([1, 2],)
        # metric matches the brute-force value for the labels it produced
        assert report.modularity == pytest.approx(
            modularity(p3, report.labels), abs=1e-15
        )

    def test_two_steps_history_keys(self, p3):
        session = Session.create(p3)
        session.step()
        session.step()
        assert sorted(session.history) == [2, 3]
        assert session.current_k == 4

    def test_step_after_accept(self, p3):
        session = Session.create(p3)
        session.step()
        session.accept(2)
        with pytest.raises(SessionClosed):
            session.step()

    def test_incremental_consistency_with_batch(self):
        g = erdos_renyi(40, 0.3, seed=2)
        session = Session.create(g)
        for _ in range(5):
            session.step()
        for K in sorted(session.history):
            batch = batch_smallest(session.pipeline, K, SolverConfig())
            got = session.basis.eigenvalues(K)
            want = np.array([p.value for p in batch])
            assert np.max(np.abs(got - want)) <= 1e-8


class TestAccept:
    def test_accept_returns_stored_report(self, p3):
        session = Session.create(p3)
        r = session.step()
        assert session.accept(2) is r
        assert session.status == "accepted"
        assert session.accepted_k == 2

    def test_unknown_k(self, p3):
        session = Session.create(p3)
        session.step()
        with pytest.raises(UnknownK):
            session.accept(5)

    def test_double_accept(self, p3):
        session = Session.create(p3)
        session.step()
        session.accept(2)
        with pytest.raises(SessionClosed):
            session.accept(2)


class TestPersistence:
    def test_round_trip(self, tmp_path):
        g = erdos_renyi(25, 0.3, seed=3)
        session = Session.create(g, SessionConfig(solver_seed=5, kmeans_seed=5))
        session.step()
        session.step()
        path = tmp_path / "session.json"
        session.save(path)
        loaded = Session.load(path)
        assert loaded.id == session.id
        assert loaded.current_k == session.current_k
        assert loaded.metrics_csv() == session.metrics_csv()
        np.testing.assert_array_equal(
            loaded.basis.eigenvalues(), session.basis.eigenvalues()
        )

    def test_resumed_session_continues(self, tmp_path):
        g = erdos_renyi(25, 0.3, seed=4)
        a = Session.create(g)
        a.step()
        path = tmp_path / "s.json"
        a.save(path)
        b = Session.load(path)
        ra = a.step()
        rb = b.step()
        assert ra.K == rb.K == 3
        assert ra.modularity == rb.modularity


class TestDeterminism:
    def test_same_seeds_same_csv(self):
        g = erdos_renyi(30, 0.25, seed=6)
        runs = []
        for _ in range(2):
            session = Session.create(g, SessionConfig(solver_seed=1, kmeans_seed=1))
            for _ in range(4):
                session.step()
            runs.append(session.metrics_csv())
        assert runs[0] == runs[1]
