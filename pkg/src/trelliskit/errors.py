"""Exception hierarchy shared by all trelliskit modules."""


class TrelliskitError(Exception):
    """Base class for all errors raised by this package."""


class TrellisFormatError(TrelliskitError):
    """A trellis, g-table or received-word file could not be parsed."""


class TrellisStructureError(TrelliskitError):
    """A trellis violates structural invariants required by an operation."""


class UnknownVertexError(TrelliskitError):
    """A vertex id was not found in the trellis."""


class PathCountError(TrelliskitError):
    """Path enumeration exceeded the configured cap."""


class GTableError(TrelliskitError):
    """A per-edge function table is missing a value for a reachable edge."""


class SemiringError(TrelliskitError):
    """A value cannot be represented in, or used with, the chosen semiring."""


class ZeroFlowError(TrelliskitError):
    """A normalized quantity is undefined because a flow is zero."""

    def __init__(self, vertex, message=None):
        self.vertex = vertex
        super().__init__(message or f"zero flow at vertex {vertex}")


class LatticeError(TrelliskitError):
    """Exact-mode distributions require a common value lattice."""


class ChannelError(TrelliskitError):
    """Channel parameters are degenerate or inputs do not match the model."""
