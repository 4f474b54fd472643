"""Exception types shared across the package."""


class PumpwiseError(Exception):
    """Base class for all toolkit errors."""


class ParseError(PumpwiseError):
    """An input file is syntactically or structurally malformed."""


class ValidationError(PumpwiseError):
    """A model invariant is violated (bad graph, bad plan, bad config)."""


class InfeasibleError(PumpwiseError):
    """The requested operating point cannot be realized on this graph."""


class SimulationError(PumpwiseError):
    """The simulator cannot run the given configuration."""
