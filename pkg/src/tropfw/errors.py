"""Exception types raised by tropfw."""


class TropFWError(Exception):
    """Base class for all tropfw errors."""


class InvalidInput(TropFWError, ValueError):
    """Non-finite data, non-positive radius, empty grid and similar."""


class DimensionError(TropFWError, ValueError):
    """Arguments disagree in dimension, or d < 2."""


class TiePresent(TropFWError, ValueError):
    """The gradient is undefined because some type set is not a singleton."""


class NegativeCycle(TropFWError, RuntimeError):
    """A residual graph has a negative cycle, so the input flow was not optimal."""


class UnboundedDirection(TropFWError, RuntimeError):
    """The objective decreases without bound along a ray."""


class InternalError(TropFWError, RuntimeError):
    pass
