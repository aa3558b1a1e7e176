"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: syntax and file-format problems are
exit 2, evaluation/analysis domain errors are exit 1.
"""


class PathweaveError(Exception):
    """Base class for all pathweave errors."""


class ExprSyntaxError(PathweaveError):
    """Raised by the expression parser; carries the byte offset of the error."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"syntax error at offset {pos}: {message}")
        self.message = message
        self.pos = pos


class GraphFormatError(PathweaveError):
    """Malformed triple, signature, or property file."""


class EvalError(PathweaveError):
    """Domain error while building or operating on path matrices."""


class AnalysisError(PathweaveError):
    """Analysis algorithm failed (non-convergence, degenerate input)."""
