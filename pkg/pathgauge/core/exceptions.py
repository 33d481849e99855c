import fastapi
from fastapi.exceptions import HTTPException

from pathgauge.core import messages


class PathGaugeException(Exception):
    "Base class of every error raised by pathgauge"

    default_message = "pathgauge could not complete the computation"

    def __init__(self, message: str = None):
        self.message = message if message else self.default_message
        super().__init__(self.message)


class CyclicGraph(PathGaugeException):
    "Exception raised when the edge relation has no topological order"

    default_message = messages.CYCLIC_GRAPH


class UnknownNeuron(PathGaugeException):
    "Exception raised when a neuron id is not part of the architecture"

    default_message = messages.UNKNOWN_NEURON


class DimensionMismatch(PathGaugeException):
    "Exception raised when an input does not have d_in coordinates"

    default_message = messages.DIMENSION_MISMATCH


class PathBudgetExceeded(PathGaugeException):
    "Exception raised when path enumeration would exceed its cap"

    default_message = messages.PATH_BUDGET_EXCEEDED


class InvalidNormSpec(PathGaugeException):
    "Exception raised when q or r are outside their admissible range"

    default_message = messages.INVALID_NORM_SPEC


class NonPositiveScale(PathGaugeException):
    "Exception raised when a rescaling factor is not strictly positive"

    default_message = messages.NON_POSITIVE_SCALE


class NotHiddenNeuron(PathGaugeException):
    "Exception raised when a rescaling targets an input or output neuron"

    default_message = messages.NOT_HIDDEN_NEURON


class PoolBiasNonZero(PathGaugeException):
    "Exception raised when a k-max-pooling neuron carries a nonzero bias"

    default_message = messages.POOL_BIAS_NON_ZERO


class BiasedIdentityNeuron(PathGaugeException):
    "Exception raised when an identity neuron to eliminate has a nonzero bias"

    default_message = messages.BIASED_IDENTITY_NEURON


class EmptyKernel(PathGaugeException):
    "Exception raised when a pooling constructor receives no antecedents"

    default_message = messages.EMPTY_KERNEL


class EmptyDataset(PathGaugeException):
    "Exception raised when a statistic needs at least one sample"

    default_message = messages.EMPTY_DATASET


class OutOfRangeLabel(PathGaugeException):
    "Exception raised when a class label is outside 1..d_out"

    default_message = messages.OUT_OF_RANGE_LABEL


class NonPositiveGamma(PathGaugeException):
    "Exception raised when a margin gamma is not strictly positive"

    default_message = messages.NON_POSITIVE_GAMMA


class ParseError(PathGaugeException):
    "Exception raised when a network or dataset file cannot be read"

    default_message = messages.PARSE_ERROR

    def __init__(self, message: str = None, line: int = None, field: str = None):
        self.line = line
        self.field = field
        located = message if message else self.default_message
        if field:
            located = f"{field}: {located}"
        if line is not None:
            located = f"line {line}: {located}"
        super().__init__(located)


class ValidationError(PathGaugeException):
    "Exception raised when a network violates the architecture invariants"

    default_message = messages.INVALID_NETWORK

    def __init__(self, report, message: str = None):
        self.report = report
        details = "; ".join(
            f"[{violation.rule}] {violation.subject}: {violation.message}"
            for violation in report.violations
        )
        super().__init__(
            f"{message if message else self.default_message}: {details}"
        )


class BadRequestException(HTTPException):
    "Exception raised when a bad request is triggered"

    def __init__(self, message: str):
        super().__init__(
            status_code=fastapi.status.HTTP_400_BAD_REQUEST,
            detail=message if message else "The request could not be processed",
        )


class UnprocessableException(HTTPException):
    "Exception raised when a submitted network is not a valid architecture"

    def __init__(self, message: str):
        super().__init__(
            status_code=fastapi.status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=message if message else messages.INVALID_NETWORK,
        )
