"""Exception types shared across the package."""


class XorGapError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(XorGapError, ValueError):
    """Operands have incompatible lengths or an index is out of range."""


class BudgetExceeded(XorGapError):
    """An exact enumeration would exceed its caller-supplied budget."""


class InvalidComplex(XorGapError, ValueError):
    """Face data is not a valid simplicial complex, or a map is not simplicial."""


class TrivialCohomology(XorGapError):
    """No non-trivial cocycle exists in the requested dimension."""


class NotRefuted(XorGapError):
    """A refutation was required but the closure does not contain 0 = 1."""


class Refuted(XorGapError):
    """A refutation-free closure was required but 0 = 1 was derived."""


class AuditFailure(XorGapError):
    """A derivation or certificate violates an identity it must satisfy."""


class ParseError(XorGapError, ValueError):
    """Malformed input file; the message carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
