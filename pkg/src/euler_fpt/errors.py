from __future__ import annotations

from typing import Optional


class EulerFptError(Exception):
    """Root of every error raised by euler_fpt."""


class InvalidGraphError(EulerFptError, ValueError):
    """Graph construction input violates the simple-graph invariants."""


class GraphFormatError(EulerFptError, ValueError):
    """
    A graph or cnf file could not be parsed.
    Carries the 1-based line number so the CLI can name the offending line.
    """

    def __init__(self, message: str, line_no: Optional[int] = None, path: Optional[str] = None):
        self.message = message
        self.line_no = line_no
        self.path = path
        super().__init__(str(self))

    def __str__(self) -> str:
        where = self.path or "<input>"
        if self.line_no is not None:
            where = f"{where}:{self.line_no}"
        return f"{where}: {self.message}"


class BudgetExceededError(EulerFptError, RuntimeError):
    def __init__(self, what: str, budget: int, actual: int):
        self.what = what
        self.budget = budget
        self.actual = actual
        super().__init__(f"{what}: {actual} exceeds the configured budget of {budget}")


class SearchBudgetExhausted(BudgetExceededError):
    """The bounded path-bundle search stopped before exploring its whole space."""

    def __init__(self, budget: int, nodes: int):
        self.nodes = nodes
        super().__init__("path search nodes", budget, nodes)


class ExtractionError(EulerFptError, RuntimeError):
    """An extractor could not materialize the structure it was asked for."""


class NotBiconnectedError(ExtractionError):
    pass


class ReductionInputError(EulerFptError, ValueError):
    pass


class CertificateError(EulerFptError, AssertionError):
    """A solver produced a certificate that does not re-verify."""
