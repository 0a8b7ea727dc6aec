"""Exception hierarchy shared by every module of the package."""


class TagedError(Exception):
    """Base class for all errors raised by :mod:`taged`."""


class InvalidPositionError(TagedError, KeyError):
    """A position does not address a node of the term."""

    def __str__(self):
        return Exception.__str__(self)


class AlienSymbolError(TagedError, ValueError):
    """A term uses a symbol that is not declared in the alphabet."""


class UnknownVertexError(TagedError, ValueError):
    """A vertex has no matching ``A_<v>`` constant in the alphabet."""


class AlphabetMismatchError(TagedError, ValueError):
    """Two automata combined by an operation use different alphabets."""


class PreconditionError(TagedError, ValueError):
    """An operation was called outside of its documented domain."""


class ParseError(TagedError, ValueError):
    """Malformed text input (term, automaton, TAGED or graph format)."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceLimitError(TagedError, RuntimeError):
    """A configured desk-scale cap would be exceeded."""

    def __init__(self, message, *, cap_name=None, cap=None, needed=None):
        self.cap_name = cap_name
        self.cap = cap
        self.needed = needed
        super().__init__(message)
