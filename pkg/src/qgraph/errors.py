"""Exception types shared across the package."""


class QGraphError(Exception):
    """Base class for all qgraph errors."""


class InvalidGraph(QGraphError):
    """Graph fails a structural requirement for the requested operation."""


class UnboundParameter(QGraphError):
    """A symbolic edge length was evaluated without a binding for it."""


class ParseError(QGraphError):
    """A graph or config file could not be parsed; message names line/field."""


class InsufficientRange(QGraphError):
    """A spectrum does not cover enough roots; retry with a larger k_max."""


class RefinementFailure(QGraphError):
    """A candidate root neither converged below the zero threshold nor
    separated cleanly above it; message reports the offending k-interval."""


class DegenerateLeadingCoefficient(QGraphError):
    """The interpolated secular polynomial has an unstable numerical degree."""


class NoLegalMove(QGraphError):
    """The move policy yields no candidate children for the parent graph."""


class ZeroGap(QGraphError):
    """The first nonzero eigenvalue is numerically zero (ratio goals)."""


class StepFailure(QGraphError):
    """Every candidate in an evolution step failed to produce a score."""
