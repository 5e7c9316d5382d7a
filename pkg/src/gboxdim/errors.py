"""Exception types raised across the package."""


class GBoxDimError(ValueError):
    """Base class for all package errors."""


class DomainError(GBoxDimError):
    """A coordinate or parameter lies outside its admissible range."""


class ResolutionError(GBoxDimError):
    """The requested scale exceeds what a set can answer faithfully."""

    def __init__(self, m, max_scale):
        self.m = m
        self.max_scale = max_scale
        super().__init__(
            f"scale m={m} exceeds the maximum faithful scale {max_scale}"
        )


class CapacityError(GBoxDimError):
    """A column must hold more distinct rows than the height cap allows."""


class EmptySetError(GBoxDimError):
    """An operation needs at least one point."""


class PreconditionError(GBoxDimError):
    """Inputs violate a lemma's hypotheses; callers report a skip."""


class ScheduleError(GBoxDimError):
    """A scale schedule is empty, malformed, or exhausted."""
