"""Exception types shared across the package.

Each carries a short machine-readable ``code`` that the command line
prints as a prefix on the error stream.
"""


class PresError(Exception):
    code = "E-PRES"


class InputError(PresError, ValueError):
    """Malformed input: unknown ids, table gaps, bad candidates."""

    code = "E-INPUT"


class CompositionError(PresError, ValueError):
    """Two terms that cannot be composed at the requested level."""

    code = "E-COMPOSE"

    def __init__(self, message, left=None, right=None):
        super().__init__(message)
        self.left = left
        self.right = right


class InconsistencyError(PresError):
    """A relation that would identify non-parallel cells."""

    code = "E-INCONSISTENT"


class BoundError(PresError):
    """A request that needs terms or cells beyond the fragment bound."""

    code = "E-BOUND"


class ParseError(PresError, ValueError):
    code = "E-SYNTAX"

    def __init__(self, message, line=None, col=None):
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.col = col


class UnresolvedError(ParseError):
    """A name that does not resolve in its section."""

    code = "E-REF"


class DuplicateError(ParseError):
    code = "E-DUP"
