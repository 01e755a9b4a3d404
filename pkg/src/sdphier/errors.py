"""Exception taxonomy shared by all sdphier modules."""


class SdphierError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(SdphierError):
    """Operands have incompatible dimensions or scalar modes."""


class IndexRangeError(SdphierError):
    """An index or index set falls outside 1..n."""


class ParseError(SdphierError):
    """An instance or certificate file could not be parsed.

    Carries optional context (field name, line) for CLI reporting.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class MalformedSystemError(SdphierError):
    """A system violates the structural requirements of regular form."""


class InvalidTailsError(SdphierError):
    """A tail-index vector violates t_{j+1} > j+1 or the range j+2..k+1."""


class NotPartiallyStrictError(SdphierError):
    """The fixed trailing values do not admit a strictly feasible completion."""


class ScaleTooSmallError(SdphierError):
    """No completion value up to the 2**4096 search cap makes the block PD."""


class NumericallyAmbiguousError(SdphierError):
    """Neither cone alternative reached its certificate tolerance."""
