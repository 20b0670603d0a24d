"""Exception hierarchy for the arrangement engine."""

from typing import Optional, Sequence


class ArrangementError(Exception):
    """Base class for every error raised by the engine."""


class PolynomialSyntaxError(ArrangementError):
    """Polynomial text that does not match the grammar."""

    def __init__(self, message: str, text: str, offset: int):
        self.offset = offset
        self.line, self.column = _line_and_column(text, offset)
        super().__init__(f"{self.line}:{self.column}: {message}")


class UnknownVariableError(PolynomialSyntaxError):
    """A variable name outside the ring's variable list."""


class ArrangementFileError(ArrangementError):
    """An arrangement file that cannot be read."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class SingularChangeError(ArrangementError):
    """A coordinate change with zero determinant."""


class NotHomogeneousError(ArrangementError):
    """Input that must be homogeneous but is not."""


class InfiniteQuotientError(ArrangementError):
    """A quotient that was expected to be finite dimensional."""


class PositiveDimensionalError(ArrangementError):
    """A projective scheme that was expected to be zero dimensional."""


class PairLimitExceeded(ArrangementError):
    """The Buchberger pair queue outgrew the configured cap."""


class HypothesisViolation(ArrangementError):
    """A mathematical hypothesis of an operation does not hold."""

    hypothesis = "hypothesis"

    def __init__(self, message: str, hypothesis: Optional[str] = None):
        if hypothesis is not None:
            self.hypothesis = hypothesis
        super().__init__(message)


class ChartCertificationError(HypothesisViolation):
    hypothesis = "generic_chart"


class CommonComponentError(HypothesisViolation):
    hypothesis = "no_common_component"


class NotReducedError(HypothesisViolation):
    hypothesis = "reduced"


class EmptyLinearSystemError(HypothesisViolation):
    hypothesis = "nonempty_linear_system"


class CertificationExhaustedError(HypothesisViolation):
    """No certified member was found within the retry bound."""

    hypothesis = "smooth_member"

    def __init__(self, message: str, last_reason: str):
        self.last_reason = last_reason
        super().__init__(f"{message} (last failure: {last_reason})")


class MalformedNumeratorError(ArrangementError):
    """A Hilbert series numerator implying a negative Hilbert function."""


class InconsistencyError(ArrangementError):
    """An identity that must hold failed; indicates a bug or bad input."""

    def __init__(self, message: str, failed: Sequence[str] = ()):
        self.failed = list(failed)
        super().__init__(message)


def _line_and_column(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    start = text.rfind("\n", 0, offset) + 1
    return line, offset - start + 1
