"""Exception types shared by all modules."""


class WicksError(Exception):
    """Base class for library errors."""


class WordSyntaxError(WicksError, ValueError):
    """A word string is not in the lowercase/uppercase/"1" syntax."""


class DomainError(WicksError, ValueError):
    """An input lies outside the domain of an operation."""


class LimitError(WicksError):
    """A configured resource cap was exceeded.

    ``cap`` names the cap and ``value`` is the limit that was hit.
    """

    def __init__(self, message: str, cap: str = "", value=None):
        super().__init__(message)
        self.cap = cap
        self.value = value


class ConstructionError(WicksError):
    """A constructive procedure failed to produce its object."""
