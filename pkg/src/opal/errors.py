"""Exception hierarchy shared by every module."""


class OpalError(Exception):
    """Base class for all library errors."""


class InputError(OpalError, ValueError):
    """Malformed input: unknown symbol or state, bad JSON, bad arguments."""


class ValidationError(InputError):
    """An automaton refers to undeclared states or symbols."""


class CompatibilityError(OpalError):
    """Two precedence matrices disagree on a cell."""

    def __init__(self, pair, first, second):
        self.pair = pair
        super().__init__(
            f"conflicting relations for ({pair[0]}, {pair[1]}): {first} vs {second}"
        )


class ParseError(OpalError):
    """A word hits an empty precedence cell or cannot be reduced."""

    def __init__(self, position, message):
        self.position = position
        super().__init__(f"at position {position}: {message}")
