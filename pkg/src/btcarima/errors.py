"""Exception hierarchy for btcarima.

Every failure mode callers are expected to handle gets its own class so that
pipelines can catch narrowly (a failed grid entry is data, a malformed CSV is
fatal).
"""


class BtcArimaError(Exception):
    """Base class for all btcarima errors."""


# --- series / transforms ---

class NonPositiveValueError(BtcArimaError):
    """Log transform requested on a series containing values <= 0."""


class SeriesTooShortError(BtcArimaError):
    """Series has too few observations for the requested operation."""


class StateMismatchError(BtcArimaError):
    """TransformState does not match the series it is being inverted on."""


# --- autocorrelation / stationarity ---

class LagTooLargeError(BtcArimaError):
    """Requested lag is not smaller than the series length."""


class DegenerateToeplitzError(BtcArimaError):
    """Durbin-Levinson recursion hit a vanishing denominator (constant series)."""


class SingularRegressionError(BtcArimaError):
    """ADF regression matrix is singular (constant or degenerate input)."""


# --- estimation / forecasting ---

class OptimizerFailureError(BtcArimaError):
    """CSS objective was non-finite at every probe; order is infeasible."""


class WindowTooShortError(BtcArimaError):
    """Forecast window shorter than the differencing order allows."""


class OutOfGridError(BtcArimaError):
    """(p, d, q) outside the searched 10 x 10 x 3 grid."""


# --- evaluation ---

class RegionTooSmallError(BtcArimaError):
    """Sampling region has fewer admissible window starts than requested."""


# --- ingestion / network ---

class ParseError(BtcArimaError):
    """CSV row could not be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line_number: int | None = None):
        super().__init__(message if line_number is None
                         else f"line {line_number}: {message}")
        self.line_number = line_number


class GapError(BtcArimaError):
    """Missing calendar day encountered under fill_policy='error'."""


class NonPositivePriceError(BtcArimaError):
    """Raw price column contains a value <= 0."""


class NetworkError(BtcArimaError):
    """Price endpoint unreachable or returned an error status."""


class MalformedResponseError(BtcArimaError):
    """Price endpoint response is not parseable date,close CSV."""
