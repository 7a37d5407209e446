"""Stored-vector Lanczos baseline: one factorization grown across increasing K.

Every Lanczos vector is kept (that is the point of the baseline: memory grows
with the factorization length) and the recurrence is continued by Z_aug steps
whenever the requested Ritz pairs have not converged. Full
reorthogonalization against all stored vectors is applied at every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .eigen import EigenPair, canonical_sign
from .errors import Breakdown, KOutOfRange, NoConvergence
from .graph import UNNORMALIZED, LaplacianOperator
from .incremental import init_basis

EPS = np.finfo(np.float64).eps


def operator_norm_estimate(op, iters: int = 20, seed: int = 0) -> float:
    """Operator 2-norm estimate by power iteration."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(op.n)
    v /= np.linalg.norm(v)
    est = 1.0
    for _ in range(iters):
        w = op.apply(v)
        est = np.linalg.norm(w)
        if est == 0.0:
            return 0.0
        v = w / est
    return float(est)


@dataclass
class LanczosState:
    op: object
    z_ini: int
    z_aug: int
    seed: int
    Q: list[np.ndarray] = field(default_factory=list)
    alphas: list[float] = field(default_factory=list)
    betas: list[float] = field(default_factory=list)  # within-T off-diagonals
    beta_next: float = 0.0
    q_next: np.ndarray | None = None
    norm_estimate: float = 0.0
    matvecs: int = 0

    @property
    def n(self) -> int:
        return self.op.n

    @property
    def z(self) -> int:
        """Stored Lanczos vector count (the memory proxy)."""
        return len(self.Q)

    @property
    def breakdown_tol(self) -> float:
        return max(self.n * EPS * self.norm_estimate, 1e3 * EPS)

    @property
    def default_tolerance(self) -> float:
        return EPS * self.norm_estimate

    def q_matrix(self) -> np.ndarray:
        return np.column_stack(self.Q)

    def tridiagonal(self) -> np.ndarray:
        T = np.diag(np.asarray(self.alphas))
        for i, b in enumerate(self.betas):
            T[i, i + 1] = T[i + 1, i] = b
        return T


def _full_reorth(state: LanczosState, r: np.ndarray) -> np.ndarray:
    Qm = state.q_matrix()
    for _ in range(2):
        r = r - Qm @ (Qm.T @ r)
    return r


def _advance(state: LanczosState, q: np.ndarray, beta_in: float) -> None:
    """Accept q as the next Lanczos vector and compute the following residual."""
    state.Q.append(q)
    if state.z > 1:
        state.betas.append(beta_in)
    u = state.op.apply(q)
    state.matvecs += 1
    alpha = float(q @ u)
    state.alphas.append(alpha)
    r = u - alpha * q
    r = _full_reorth(state, r)
    beta = float(np.linalg.norm(r))
    if state.z >= state.n or beta < state.breakdown_tol:
        state.beta_next = 0.0
        state.q_next = None
    else:
        state.beta_next = beta
        state.q_next = r / beta


def _restart_vector(state: LanczosState) -> np.ndarray:
    rng = np.random.default_rng(state.seed + 104729 + state.z)
    for _ in range(20):
        v = _full_reorth(state, rng.standard_normal(state.n))
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            return v / norm
    raise NoConvergence(state.matvecs, float("nan"))


def _grow(state: LanczosState, count: int, on_breakdown: str) -> None:
    for _ in range(count):
        if state.z >= state.n:
            return
        if state.q_next is None:
            if on_breakdown == "raise":
                raise Breakdown(step=state.z, state=state)
            # invariant subspace hit: restart with a vector orthogonal to Q,
            # recorded with zero coupling (T becomes block-diagonal there)
            state.q_next = _restart_vector(state)
            state.beta_next = 0.0
        _advance(state, state.q_next, state.beta_next)


def lanczos_init(
    M,
    z_ini: int,
    seed: int = 0,
    z_aug: int = 10,
    start_vector: np.ndarray | None = None,
    on_breakdown: str = "raise",
) -> LanczosState:
    if not (1 <= z_ini <= M.n):
        raise KOutOfRange(f"Z_ini={z_ini} out of range for n={M.n}")
    state = LanczosState(op=M, z_ini=z_ini, z_aug=z_aug, seed=seed)
    state.norm_estimate = operator_norm_estimate(M, seed=seed)
    if start_vector is None:
        rng = np.random.default_rng(seed)
        q0 = rng.standard_normal(M.n)
    else:
        q0 = np.asarray(start_vector, dtype=np.float64)
    q0 = q0 / np.linalg.norm(q0)
    _advance(state, q0, 0.0)
    _grow(state, z_ini - 1, on_breakdown=on_breakdown)
    return state


def lanczos_extend(state: LanczosState, z_aug: int, on_breakdown: str = "raise") -> LanczosState:
    if z_aug < 0:
        raise KOutOfRange("Z_aug must be nonnegative")
    _grow(state, min(z_aug, state.n - state.z), on_breakdown)
    return state


@dataclass
class RitzSet:
    values: np.ndarray  # descending by absolute value
    vectors: np.ndarray  # n x K, columns Q @ u_i
    residuals: np.ndarray
    U: np.ndarray  # z x K tridiagonal eigenvector columns


def ritz_pairs(state: LanczosState, K: int) -> RitzSet:
    if K > state.z:
        raise KOutOfRange(f"K={K} exceeds stored vector count Z={state.z}")
    alphas = np.asarray(state.alphas)
    if state.z == 1:
        t, U = alphas.copy(), np.ones((1, 1))
    else:
        t, U = scipy.linalg.eigh_tridiagonal(alphas, np.asarray(state.betas))
    order = np.argsort(-np.abs(t), kind="stable")[:K]
    t, U = t[order], U[:, order]
    vectors = state.q_matrix() @ U
    if state.z == 1:
        residuals = np.zeros(K)  # no off-diagonal yet
    else:
        residuals = np.abs(state.beta_next * U[-1, :])
    return RitzSet(values=t, vectors=vectors, residuals=residuals, U=U)


def lanczos_io_next(
    state: LanczosState, K: int, tolerance: float | None = None
) -> list[EigenPair]:
    """Extend until the K leading Ritz pairs converge, then return them.

    The state persists across calls, so raising K reuses all stored vectors
    and a repeated call with an already-converged K performs no extension.
    """
    if not (1 <= K <= state.n):
        raise KOutOfRange(f"K={K} out of range for n={state.n}")
    tol = state.default_tolerance if tolerance is None else tolerance
    while state.z < K:
        lanczos_extend(state, min(state.z_aug, K - state.z), on_breakdown="restart")
    while True:
        rs = ritz_pairs(state, K)
        worst = float(rs.residuals.max())
        if worst <= tol:
            return [
                EigenPair(float(rs.values[i]), canonical_sign(rs.vectors[:, i]))
                for i in range(K)
            ]
        if state.z >= state.n:
            raise NoConvergence(state.matvecs, worst)
        lanczos_extend(state, state.z_aug, on_breakdown="restart")


class SmallestViaLanczos:
    """Smallest Laplacian eigenpairs through the stored-vector baseline.

    Works on M = L + c * V_delta V_delta^T - c * I (c = s or 2), whose leading
    pairs by absolute value are the non-trivial smallest pairs of L shifted
    down by c; the trivial null-space pairs are known in closed form.
    """

    def __init__(
        self,
        op: LaplacianOperator,
        z_ini: int = 20,
        z_aug: int = 10,
        seed: int = 0,
        tolerance: float | None = None,
    ):
        from .incremental import InflatedOperator

        self.op = op
        self.basis = init_basis(op)
        self.shift = self.basis.shift
        self._M = InflatedOperator(self.basis)
        self.state = lanczos_init(
            self._M, min(z_ini, op.n), seed=seed, z_aug=z_aug, on_breakdown="restart"
        )
        self.tolerance = tolerance

    def compute(self, K: int) -> list[EigenPair]:
        """K smallest eigenpairs of L, ascending."""
        if not (1 <= K <= self.op.n):
            raise KOutOfRange(f"K={K} out of range for n={self.op.n}")
        delta = self.basis.delta
        pairs = [
            EigenPair(0.0, self.basis.trivial[:, j].copy())
            for j in range(min(delta, K))
        ]
        if K > delta:
            for p in lanczos_io_next(self.state, K - delta, self.tolerance):
                pairs.append(EigenPair(p.value + self.shift, p.vector))
        return pairs

    @property
    def stored_vectors(self) -> int:
        return self.state.z
