"""Exception types shared across the package."""


class PolyliftError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(PolyliftError):
    """Vectors/matrices/points of incompatible lengths were combined."""


class UnknownNode(PolyliftError):
    """A node id is not part of the graph it was used with."""


class NotAcyclic(PolyliftError):
    """The digraph contains a directed cycle."""


class NotASource(PolyliftError):
    """The designated start node has incoming arcs."""


class SameNodes(PolyliftError):
    """The two designated nodes must be distinct."""


class SizeLimitExceeded(PolyliftError):
    """An enumeration was asked to run beyond its configured cap."""


class Unbounded(PolyliftError):
    """Vertex enumeration found a nontrivial recession direction."""


class LexViolation(PolyliftError):
    """A 0/1 matrix does not satisfy the column lex condition."""


class DomainViolation(PolyliftError):
    """A point lies outside the lifting domain it was offered to."""


class InternalInvariantError(PolyliftError):
    """An internal consistency check failed; indicates a bug, not bad input."""
