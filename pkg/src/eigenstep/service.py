"""JSON API over clustering sessions (FastAPI)."""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .errors import (
    BasisFull,
    EigenstepError,
    GraphError,
    NoConvergence,
    SessionClosed,
    UnknownK,
    UnknownSession,
)
from .graph import UNNORMALIZED, build_graph
from .ingest import knn_graph, load_edge_list, load_points_csv
from .session import Session, SessionConfig


class GraphSpec(BaseModel):
    # inline edges or a server-side file path; exactly one of the two
    n: int | None = None
    edges: list[tuple[int, int, float]] | None = None
    path: str | None = None
    format: str = "edgelist"  # edgelist | mtx | points
    knn: int = 8
    kernel: str = "unit"
    sigma: float | None = None


class SessionRequest(BaseModel):
    graph: GraphSpec
    variant: str = UNNORMALIZED
    allow_disconnected: bool = False
    solver_seed: int = 0
    solver_tolerance: float = 1e-10
    kmeans_seed: int = 0
    kmeans_restarts: int = 10


class SessionCreated(BaseModel):
    id: str


class ReportModel(BaseModel):
    K: int
    modularity: float
    scaled_nc: float
    scaled_median: float
    scaled_max: float
    scaled_energy: float
    sizes: list[int]


class SessionState(BaseModel):
    id: str
    status: str
    current_k: int
    accepted_k: int | None
    n: int
    history_keys: list[int]


class LabelsModel(BaseModel):
    K: int
    labels: list[int]


class AcceptRequest(BaseModel):
    K: int = Field(ge=1)


def _report_model(report) -> ReportModel:
    return ReportModel(
        K=report.K,
        modularity=report.modularity,
        scaled_nc=report.scaled_nc,
        scaled_median=report.scaled_median_size,
        scaled_max=report.scaled_max_size,
        scaled_energy=report.scaled_spectrum_energy,
        sizes=[int(x) for x in report.sizes],
    )


class SessionStore:
    def __init__(self, state_dir: str | Path | None = None):
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self.state_dir = Path(state_dir) if state_dir else None
        if self.state_dir:
            self.state_dir.mkdir(parents=True, exist_ok=True)

    def add(self, session: Session) -> None:
        with self._registry_lock:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()
        self.persist(session)

    def get(self, session_id: str) -> Session:
        with self._registry_lock:
            if session_id in self._sessions:
                return self._sessions[session_id]
        if self.state_dir:
            path = self.state_dir / f"{session_id}.json"
            if path.exists():
                session = Session.load(path)
                with self._registry_lock:
                    self._sessions[session.id] = session
                    self._locks.setdefault(session.id, threading.Lock())
                return session
        raise UnknownSession(f"unknown session {session_id}")

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks[session_id]

    def persist(self, session: Session) -> None:
        if self.state_dir:
            session.save(self.state_dir / f"{session.id}.json")


def _build_graph_from_spec(spec: GraphSpec):
    if spec.edges is not None:
        n = spec.n if spec.n is not None else (
            1 + max((max(i, j) for i, j, _ in spec.edges), default=-1)
        )
        return build_graph(n, spec.edges)
    if spec.path is None:
        raise HTTPException(status_code=422, detail="graph needs either edges or path")
    if spec.format in ("edgelist", "mtx"):
        return load_edge_list(spec.path)
    if spec.format == "points":
        return knn_graph(load_points_csv(spec.path), spec.knn, spec.kernel, spec.sigma)
    raise HTTPException(status_code=422, detail=f"unknown format {spec.format!r}")


def create_app(state_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="eigenstep session service")
    store = SessionStore(state_dir)
    app.state.store = store

    def _get(session_id: str) -> Session:
        try:
            return store.get(session_id)
        except UnknownSession as err:
            raise HTTPException(status_code=404, detail=str(err)) from err

    @app.post("/sessions", response_model=SessionCreated)
    def create_session(req: SessionRequest):
        try:
            graph = _build_graph_from_spec(req.graph)
            config = SessionConfig(
                variant=req.variant,
                allow_disconnected=req.allow_disconnected,
                solver_seed=req.solver_seed,
                solver_tolerance=req.solver_tolerance,
                kmeans_seed=req.kmeans_seed,
                kmeans_restarts=req.kmeans_restarts,
            )
            session = Session.create(graph, config)
        except (GraphError, ValueError, EigenstepError, FileNotFoundError) as err:
            raise HTTPException(status_code=422, detail=str(err)) from err
        store.add(session)
        return SessionCreated(id=session.id)

    @app.post("/sessions/{session_id}/step", response_model=ReportModel)
    def step(session_id: str):
        session = _get(session_id)
        lock = store.lock(session_id)
        if not lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="a step is already in flight")
        try:
            report = session.step()
        except (SessionClosed, BasisFull, NoConvergence) as err:
            raise HTTPException(status_code=409, detail=str(err)) from err
        finally:
            lock.release()
        store.persist(session)
        return _report_model(report)

    @app.get("/sessions/{session_id}/metrics", response_model=list[ReportModel])
    def metrics(session_id: str):
        session = _get(session_id)
        return [_report_model(r) for r in session.metrics_history()]

    @app.get("/sessions/{session_id}/clusters/{K}", response_model=LabelsModel)
    def clusters(session_id: str, K: int):
        session = _get(session_id)
        if K not in session.history:
            raise HTTPException(status_code=404, detail=f"no report at K={K}")
        return LabelsModel(K=K, labels=[int(x) for x in session.history[K].labels])

    @app.post("/sessions/{session_id}/accept", response_model=ReportModel)
    def accept(session_id: str, req: AcceptRequest):
        session = _get(session_id)
        try:
            report = session.accept(req.K)
        except UnknownK as err:
            raise HTTPException(status_code=404, detail=str(err)) from err
        except SessionClosed as err:
            raise HTTPException(status_code=409, detail=str(err)) from err
        store.persist(session)
        return _report_model(report)

    @app.get("/sessions/{session_id}", response_model=SessionState)
    def state(session_id: str):
        session = _get(session_id)
        return SessionState(
            id=session.id,
            status=session.status,
            current_k=session.current_k,
            accepted_k=session.accepted_k,
            n=session.original.n,
            history_keys=sorted(session.history),
        )

    return app
