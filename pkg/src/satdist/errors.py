"""Exception types shared across the package."""


class SatDistError(Exception):
    """Base class for all errors raised by satdist."""


class DimensionError(SatDistError, ValueError):
    """Operands disagree on the cube dimension."""


class EnumerationLimitError(SatDistError, ValueError):
    """Exact enumeration was requested for a dimension above the guard."""


class ParseError(SatDistError, ValueError):
    """Malformed function text (header, literal or truth-table length)."""


class UnsatisfiableError(SatDistError):
    """The Boolean function has no satisfying assignment."""


class SamplingError(SatDistError, RuntimeError):
    """Rejection sampling exhausted its attempt budget."""


class SupportError(SatDistError, ValueError):
    """P puts mass where Q has none."""

    def __init__(self, index, message=None):
        self.index = int(index)
        super().__init__(message or f"support violation at index {self.index}: P>0 but Q=0")


class NumericError(SatDistError, FloatingPointError):
    """A non-finite value appeared during optimization."""
