"""Exception types shared across the package."""


class ContextError(ValueError):
    """Operands live in different ring contexts (or have mismatched shapes)."""


class ParseError(ValueError):
    """Malformed polynomial or problem text. Carries a 1-based line and column."""

    def __init__(self, message, text="", pos=0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.col = line, col
        super().__init__(f"{message} (line {line}, column {col})")


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class InternalConsistencyError(RuntimeError):
    """Two independent constructions that must agree did not. Always fatal."""
