"""Exceptions raised by coarse_maps. Each one derives from a built-in exception
so callers that only know about ValueError or TypeError still catch them."""


class CoarseMapsError(Exception):
    """Base class for every error raised on purpose by this package."""


class MalformedInputError(CoarseMapsError, ValueError):
    """A word, element literal, group spec or table file could not be read."""


class DegenerateInputError(CoarseMapsError, ValueError):
    """The input is well formed but the operation is undefined on it."""


class GroupMismatchError(CoarseMapsError, ValueError):
    """Operands belong to different groups, or an element is not in the group
    it was passed with."""


class MapSyntaxError(CoarseMapsError, ValueError):
    """The map DSL could not be parsed. `position` is the 0-based offset into
    the text at which parsing stopped."""

    def __init__(self, message: str, position: int):
        super().__init__(f'{message} (at position {position})')
        self.position = position


class MapTypeError(CoarseMapsError, TypeError):
    """A map family was applied to groups it is not defined on."""


class ConfigurationError(CoarseMapsError, ValueError):
    """Radii, budgets or other parameters violate an operation's preconditions."""


class PreconditionError(CoarseMapsError, ValueError):
    """The map or group passed does not satisfy the operation's precondition."""
