"""
Exception hierarchy for qkmech.

Every error raised on purpose by the library derives from QKMechError so the
command line can map it to an exit code in one place.
"""

from typing import Any, List, Optional, Tuple


Span = Tuple[int, int]


class QKMechError(Exception):
    """Base class for all library errors."""


class DimensionError(QKMechError, ValueError):
    """Vector or matrix shape does not match the chart dimension."""


class ConfigError(QKMechError, ValueError):
    """Invalid configuration file contents or flag combination."""


class DomainError(QKMechError, ValueError):
    """A field is undefined or not smooth at the evaluation point."""

    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        if self.span is None:
            return self.message
        return f"{self.message} (at bytes {self.span[0]}..{self.span[1]})"


class SingularHessianError(QKMechError):
    """The Hessian of the Lagrangian cannot be inverted at a point."""

    def __init__(self, condition: float, message: str = ""):
        self.condition = condition
        self.message = message or f"singular Hessian (condition estimate {condition:.3e})"
        super().__init__(self.message)


class InconsistencyError(QKMechError):
    """Two independent assembly paths disagree; signals a convention bug."""

    def __init__(self, message: str, deviation: float):
        super().__init__(f"{message} (deviation {deviation:.3e})")
        self.deviation = deviation


class CompatibilityError(QKMechError):
    """A metric is not compatible with one of the structure operators."""

    def __init__(self, kind: Any, violation: float):
        super().__init__(
            f"metric is not compatible with structure {kind} (violation {violation:.3e})"
        )
        self.kind = kind
        self.violation = violation


class ParseError(QKMechError):
    """A Lagrangian expression could not be parsed.

    Attributes:
        message: Human readable description.
        span: Byte offsets (start, end) into the UTF-8 encoded source.
        expected: Token kinds that would have been accepted.
        source: The source text, used to render a caret annotation.
    """

    def __init__(
        self,
        message: str,
        span: Span,
        expected: Optional[List[str]] = None,
        source: Optional[str] = None,
    ):
        super().__init__(message)
        self.message = message
        self.span = span
        self.expected = list(expected or [])
        self.source = source

    def __str__(self) -> str:
        text = f"{self.message} at byte {self.span[0]}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        return text

    def annotate(self) -> str:
        """Render the source with a caret line under the offending span."""
        if self.source is None:
            return str(self)
        raw = self.source.encode("utf-8", errors="surrogatepass")
        start = len(raw[: self.span[0]].decode("utf-8", errors="ignore"))
        end = len(raw[: self.span[1]].decode("utf-8", errors="ignore"))
        width = max(1, end - start)
        return f"{self.source}\n{' ' * start}{'^' * width}\n{self}"


class IntegrationError(QKMechError):
    """A time integration stopped early.

    The partial trajectory and its drift report travel with the error so
    callers can still write what was computed.
    """

    def __init__(self, cause: Exception, t: float, trajectory: Any = None, report: Any = None):
        super().__init__(f"integration failed at t={t:.17g}: {cause}")
        self.cause = cause
        self.t = t
        self.trajectory = trajectory
        self.report = report


class StepSizeError(QKMechError):
    """Adaptive step control could not meet the tolerance at the minimum step."""

    def __init__(self, dt: float, error: float, tolerance: float):
        super().__init__(
            f"step error {error:.3e} exceeds tolerance {tolerance:.3e} at minimum step {dt:.3e}"
        )
        self.dt = dt
        self.error = error
        self.tolerance = tolerance


class TimeStallError(QKMechError):
    """Adding the step to the current time no longer changes it."""

    def __init__(self, t: float, dt: float):
        super().__init__(f"time stopped advancing at t={t:.17g} with step {dt:.3e}")
        self.t = t
        self.dt = dt
