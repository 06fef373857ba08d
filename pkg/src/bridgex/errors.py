"""Exception types shared across the package."""


class BridgexError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(BridgexError):
    pass


class NonFiniteInput(BridgexError):
    pass


class ConstantColumn(BridgexError):
    """A covariate column has zero variance and cannot be scaled."""

    def __init__(self, column: int):
        self.column = column
        super().__init__(f"covariate column {column} is constant")


class NotStandardized(BridgexError):
    pass


class InvalidGamma(BridgexError):
    pass


class SingularDesign(BridgexError):
    pass


class SingularSelectedGram(BridgexError):
    pass


class NoSelection(BridgexError):
    pass


class TooManySelected(BridgexError):
    pass


class InvalidSpec(BridgexError):
    pass


class DataError(BridgexError):
    """Malformed input file (bad header, non-numeric cell, ragged rows)."""


class UsageError(BridgexError):
    """Bad command line invocation."""
