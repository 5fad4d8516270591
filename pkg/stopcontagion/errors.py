"""Exception hierarchy shared by the library and the CLI.

Every error carries an ``exit_code`` and a human readable ``detail``; the CLI
turns them into process exit codes the same way an HTTP layer turns
exceptions into status codes.
"""
from typing import Optional


class ContagionError(Exception):
    exit_code: int = 1

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class GraphError(ContagionError, ValueError):
    """Malformed graph input or an impossible generator request."""


class SelfLoop(GraphError):
    def __init__(self, u: int):
        super().__init__(f"self-loop at vertex {u}")
        self.u = u


class DuplicateEdge(GraphError):
    def __init__(self, u: int, v: int):
        super().__init__(f"duplicate edge ({u}, {v})")
        self.edge = (min(u, v), max(u, v))


class VertexOutOfRange(GraphError):
    def __init__(self, u: int, n: int):
        super().__init__(f"vertex {u} outside 0..{n - 1}")
        self.u = u
        self.n = n


class NotATree(GraphError):
    pass


class BadProbability(GraphError):
    pass


class ParityViolation(GraphError):
    pass


class DegreeTooLarge(GraphError):
    pass


class InfeasibleDegree(GraphError):
    pass


class KOutOfRange(GraphError):
    pass


class NoConnectedSubgraph(GraphError):
    pass


class ParseError(ContagionError, ValueError):
    """A text input (edge list, seeds, thresholds, decomposition) could not be read."""


class BadSpec(ParseError):
    """A model spec string such as ``gnp:n=100,d=3`` is malformed."""


class InvalidInstance(ContagionError, ValueError):
    pass


class SeedImmunized(InvalidInstance):
    def __init__(self, v: int):
        super().__init__(f"seed {v} is immunized")
        self.v = v


class InvalidDecomposition(ContagionError, ValueError):
    pass


class TooLarge(ContagionError):
    """An exponential oracle was asked to run beyond its guard."""

    exit_code = 2


class VerificationError(ContagionError):
    """A solver result did not survive re-percolation."""

    exit_code = 3


class IllegalState(VerificationError):
    pass


class NoSolutionFound(ContagionError):
    exit_code = 3


class IoError(ContagionError):
    """An input or output file could not be read or written."""


class StoreError(ContagionError):
    """The result store rejected a read or write."""


class ConfigError(ContagionError, ValueError):
    """An environment setting could not be parsed."""

    exit_code = 2
