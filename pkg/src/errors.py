"""
MatchEnt Errors

Exception hierarchy shared by every module. The CLI maps these to
exit codes; library callers can catch MatchEntError as a whole.
"""

from typing import Optional


class MatchEntError(Exception):
    """Base class for all MatchEnt failures."""


class ConfigError(MatchEntError):
    """Bad config.json value or environment override."""


class GraphParseError(MatchEntError):
    """Malformed edge-list document."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VertexRangeError(MatchEntError):
    """Edge endpoint outside the declared vertex range."""


class DomainError(MatchEntError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class MatchingTooLargeError(MatchEntError):
    """Graph exceeds the exact-computation size guard."""

    def __init__(self, vertex_count: int, limit: int):
        self.vertex_count = vertex_count
        self.limit = limit
        super().__init__(
            f"graph has {vertex_count} vertices, exact limit is {limit} "
            f"(raise MATCHENT_MAX_VERTICES to override)"
        )


class RootIsolationError(MatchEntError):
    """Root isolation lost a root. Always an implementation bug."""


class LiftLemmaViolation(MatchEntError):
    """A 2-lift had more k-matchings than the trivial lift."""

    def __init__(self, k: int, margin: int):
        self.k = k
        self.margin = margin
        super().__init__(f"m_{k}(G+G) - m_{k}(H) = {margin} < 0")
