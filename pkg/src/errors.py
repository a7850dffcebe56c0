"""
Exception hierarchy for the coauthorship PageRank toolkit.

Every error knows the process exit code it maps to and the pipeline stage
it surfaced from. The stage is filled in by the pipeline as the error
propagates, so library callers can ignore it.
"""

from typing import Any, Dict, Iterable, Optional


EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2
EXIT_USAGE = 3


class AnalysisError(Exception):
    """Base class for all toolkit errors."""

    exit_code = EXIT_INPUT

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.stage = stage

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form printed by the CLI."""
        return {
            "error": type(self).__name__,
            "stage": self.stage,
            "message": self.message,
        }


class InputError(AnalysisError):
    """Bad or unusable input data."""

    exit_code = EXIT_INPUT


class NumericalError(AnalysisError):
    """A computation could not produce a trustworthy number."""

    exit_code = EXIT_NUMERICAL


class UsageError(AnalysisError):
    """Invalid command-line usage or configuration."""

    exit_code = EXIT_USAGE


# Graph construction

class EmptyGraph(InputError):
    pass


class InvalidWeight(InputError):
    def __init__(self, record: Any, stage: Optional[str] = None):
        super().__init__(f"Edge weight must be positive, got record {record!r}", stage)
        self.record = record


class InvalidAuthorId(InputError):
    pass


class DanglingNode(InputError):
    def __init__(self, author: str, stage: Optional[str] = None):
        super().__init__(
            f"Author '{author}' has no coauthors; extract components before building the operator",
            stage,
        )
        self.author = author


# Ranking

class ZeroTeleportMass(InputError):
    pass


class InvalidDamping(UsageError):
    pass


class InvalidSchedule(UsageError):
    pass


class NonConvergence(NumericalError):
    def __init__(self, residual: float, iterations: int, damping: Optional[float] = None,
                 stage: Optional[str] = None):
        self.residual = residual
        self.iterations = iterations
        self.damping = damping
        super().__init__(self._describe(), stage)

    def _describe(self) -> str:
        where = f" at damping {self.damping}" if self.damping is not None else ""
        return (
            f"Power iteration did not converge{where} after {self.iterations} "
            f"iterations (last L1 residual {self.residual:.3e})"
        )

    def with_damping(self, damping: float) -> "NonConvergence":
        self.damping = damping
        self.message = self._describe()
        self.args = (self.message,)
        return self


class TooLargeForDirectSolve(NumericalError):
    pass


# Statistics

class TooFewObservations(InputError):
    pass


class UndefinedCorrelation(NumericalError):
    pass


class LengthMismatch(InputError):
    pass


class InvalidLevels(UsageError):
    pass


class InsufficientBins(NumericalError):
    pass


class NonPositiveValues(InputError):
    pass


class AuthorSetMismatch(InputError):
    def __init__(self, only_left: Iterable[str], only_right: Iterable[str],
                 stage: Optional[str] = None):
        self.only_left = sorted(only_left)
        self.only_right = sorted(only_right)
        self.difference = sorted(set(self.only_left) | set(self.only_right))
        preview = ", ".join(self.difference[:10])
        more = "" if len(self.difference) <= 10 else f" (+{len(self.difference) - 10} more)"
        super().__init__(f"Author sets differ in {len(self.difference)} authors: {preview}{more}", stage)


# Metrics

class InvalidK(UsageError):
    pass


# Ingest

class IoError(InputError):
    pass


class NoValidRecords(InputError):
    pass


class MalformedLine(InputError):
    def __init__(self, path: str, line_number: int, reason: str, stage: Optional[str] = None):
        super().__init__(f"{path}:{line_number}: {reason}", stage)
        self.line_number = line_number


class InvalidCount(MalformedLine):
    pass


class DuplicateAuthor(InputError):
    def __init__(self, author: str, line_number: int, stage: Optional[str] = None):
        super().__init__(f"Duplicate author '{author}' on line {line_number}", stage)
        self.author = author
        self.line_number = line_number


class EmptyAwardList(InputError):
    pass
