"""Exception types shared across the package."""


class HompsError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(HompsError, ValueError):
    """An input parameter violates its documented domain."""


class NoHeraldEventsError(HompsError, RuntimeError):
    """Heralding is impossible or produced zero events."""


class UndefinedG2Error(HompsError, RuntimeError):
    """g2 is undefined because a detector click probability is zero."""


class NoDetectionsError(HompsError, RuntimeError):
    """The link produces no detections at all."""
