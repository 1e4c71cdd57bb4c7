"""Semantic exceptions shared across the package."""


class InvalidArgumentError(ValueError):
    """Inputs violate an operation's contract (domain, shape, ordering)."""


class RangeOverflowError(OverflowError):
    """A closed-form bound exceeds double range; raised instead of returning inf."""
