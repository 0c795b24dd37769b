"""Exception hierarchy shared by all trex modules."""


class TrexError(Exception):
    """Base class for every error raised by this package."""


class InvalidGraph(TrexError, ValueError):
    """Self-loop, duplicate edge or endpoint outside 1..n."""


class ParseError(TrexError, ValueError):
    pass


class Disconnected(TrexError):
    """Input graph is not (weakly) connected."""

    def __init__(self, components: int, message: str | None = None):
        self.components = components
        super().__init__(message or f"graph has {components} weakly connected components")


class ReducedDisconnected(Disconnected):
    pass


class ZeroEdges(TrexError, ValueError):
    pass


class BadEdgeIndex(TrexError, IndexError):
    pass


class SumMismatch(TrexError, ValueError):
    pass


class BadExtraction(TrexError, ValueError):
    pass


class NotSpanning(TrexError, ValueError):
    pass


class TooManyTrees(TrexError):
    pass


class TooLarge(TrexError):
    pass


class OutOfRange(TrexError, IndexError):
    pass


class NoSuchOccurrence(OutOfRange):
    pass


class RootHasNoParent(TrexError, ValueError):
    pass


class NotANeighbour(TrexError, ValueError):
    pass


class InfeasibleSequence(TrexError, ValueError):
    pass


class ContainerError(TrexError, ValueError):
    """Malformed or inconsistent container bytes."""
