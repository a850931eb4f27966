"""Exception types shared across the toolkit."""

from __future__ import annotations


class TanglegramError(ValueError):
    """An input violates the precondition of an operation."""


class RefusalError(TanglegramError):
    """The request is outside the supported size range."""


class PreconditionError(TanglegramError):
    """A tanglegram does not have exactly one cross-responsible set."""

    def __init__(self, count: int, message: str | None = None):
        self.count = count
        super().__init__(message or f"expected exactly one cross-responsible set, found |X|={count}")


class ConsistencyError(RuntimeError):
    """An internal invariant failed; ``check`` names the violated property."""

    def __init__(self, check: str, message: str):
        self.check = check
        super().__init__(f"[{check}] {message}")


class BudgetExhausted(RuntimeError):
    """The exact search ran out of its node budget before reaching an answer."""


class ParseError(TanglegramError):
    """Malformed TGL or layout text.

    ``code`` is one of ``syntax``, ``non_binary``, ``matching``,
    ``duplicate_label``, ``label``.
    """

    def __init__(self, code: str, message: str, line: int | None = None, column: int | None = None):
        self.code = code
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(f"{code}: {message}{where}")
