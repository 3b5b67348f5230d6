from __future__ import annotations


class ProbGKATError(Exception):
    pass


class ParseError(ProbGKATError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class AlphabetError(ProbGKATError, ValueError):
    pass


class AtomLimitError(ProbGKATError, ValueError):
    pass


class SideConditionError(ProbGKATError, ValueError):
    def __init__(self, condition: str):
        self.condition = condition
        super().__init__(f"side condition violated: {condition}")


class BindingError(ProbGKATError, ValueError):
    pass


class ProofError(ProbGKATError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class InvariantViolation(ProbGKATError, RuntimeError):
    """An internal invariant broke; indicates a bug rather than bad input."""


class ProbabilityError(ProbGKATError, ValueError):
    pass
