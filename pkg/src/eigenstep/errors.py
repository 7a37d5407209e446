"""Exception hierarchy shared across the package."""


class EigenstepError(Exception):
    """Base class for all package errors."""


# --- graph construction / validation ---

class GraphError(EigenstepError):
    pass


class IndexOutOfRange(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class NonpositiveWeight(GraphError):
    pass


class ZeroStrengthNode(GraphError):
    pass


class DisconnectedGraph(GraphError):
    """Raised when an operation requires a connected graph."""

    def __init__(self, component_count: int):
        self.component_count = component_count
        super().__init__(
            f"graph is disconnected ({component_count} components); "
            "enable disconnected mode to proceed"
        )


# --- solvers ---

class SolverError(EigenstepError):
    pass


class NoConvergence(SolverError):
    def __init__(self, iterations: int, last_residual: float):
        self.iterations = iterations
        self.last_residual = last_residual
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(last residual {last_residual:.3e})"
        )


class TooLargeForDense(SolverError):
    pass


class BasisFull(SolverError):
    pass


class Breakdown(SolverError):
    """Lanczos recurrence hit an invariant subspace (beta underflow).

    The state attached to the exception is still valid up to ``step`` vectors.
    """

    def __init__(self, step: int, state=None):
        self.step = step
        self.state = state
        super().__init__(f"Lanczos breakdown at step {step}")


class DimensionMismatch(EigenstepError):
    pass


# --- ingest ---

class ParseError(EigenstepError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class KOutOfRange(EigenstepError):
    pass


# --- clustering ---

class KTooLarge(EigenstepError):
    pass


class ZeroVolumeCluster(EigenstepError):
    pass


# --- sessions ---

class UnknownK(EigenstepError):
    pass


class SessionClosed(EigenstepError):
    pass


class UnknownSession(EigenstepError):
    pass
