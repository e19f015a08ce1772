"""Exception hierarchy.

Every domain error derives from :class:`HopfError`, so callers (and the CLI)
can catch one class to separate domain failures from programming errors.
"""


class HopfError(Exception):
    """Base class for all domain errors raised by this package."""


class UnknownSymbol(HopfError):
    def __init__(self, position: int, symbol: str = ""):
        self.position = position
        self.symbol = symbol
        super().__init__(f"unknown symbol {symbol!r} at position {position}")


class AlphabetMismatch(HopfError):
    pass


class BadAlphabet(HopfError):
    pass


class DegreeCapExceeded(HopfError):
    def __init__(self, degree: int, cap: int):
        self.degree = degree
        self.cap = cap
        super().__init__(f"degree {degree} exceeds cap {cap}")


class StructureMismatch(HopfError):
    pass


class DeckTooLarge(HopfError):
    pass


class NoConvergence(HopfError):
    pass


class NotStochastic(HopfError):
    pass


class BadDimension(HopfError):
    pass


class EmptyContext(HopfError):
    pass


class LengthMismatch(HopfError):
    pass


class CorpusTooShort(HopfError):
    pass


class BadArtifact(HopfError):
    """A JSON artifact could not be decoded into the expected object."""
