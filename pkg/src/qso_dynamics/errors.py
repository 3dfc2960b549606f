"""Exception hierarchy shared by all modules.

Every exception carries a short machine-readable ``code`` so the CLI can map
failures to exit codes without string matching.
"""


class QsoError(Exception):
    code = "ERROR"

    def __init__(self, message=""):
        super().__init__(f"{self.code}: {message}" if message else self.code)


class DimensionError(QsoError):
    code = "DIMENSION"


class NegativeMassError(QsoError):
    code = "NEGATIVE_MASS"


class ZeroSumError(QsoError):
    code = "ZERO_SUM"


class ParamRangeError(QsoError):
    code = "PARAM_RANGE"


class TensorInvariantError(QsoError):
    code = "TENSOR_INVARIANT"


class OrderTooLargeError(QsoError):
    code = "ORDER_TOO_LARGE"


class WindowTooLargeError(QsoError):
    code = "WINDOW_TOO_LARGE"


class EpsilonNonPositiveError(QsoError):
    code = "EPSILON_NONPOSITIVE"


class NotAFixedPointError(QsoError):
    code = "NOT_A_FIXED_POINT"


class NumericOverflowError(QsoError):
    code = "NUMERIC_OVERFLOW"


class SamplesEmptyError(QsoError):
    code = "SAMPLES_EMPTY"


class ConfigError(QsoError):
    code = "CONFIG"
