"""Exception types shared across the package."""


class Undecidable(Exception):
    """An enclosure still meets a decision boundary at the precision cap."""


class InsufficientPrecision(Undecidable):
    """Fewer certified quotients are available than an operation needs."""


class DomainError(ValueError):
    """Input lies outside the domain where an operation is defined."""


class GeometryInconsistency(RuntimeError):
    """A computed region contradicts the classification of prototype sets."""
