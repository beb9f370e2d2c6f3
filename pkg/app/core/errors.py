"""
Error hierarchy for grid code tooling.

Every failure carries an ErrorCode so the CLI can map it to an exit status.
Negative outcomes that are part of normal operation (a code that is not
completely regular, an infeasible LP, a timeout) are values, not errors.
"""
from enum import Enum


class ErrorCode(Enum):
    INVALID_ARGUMENT = 1
    UNSUPPORTED_WEIGHT = 2
    EMPTY_CAP = 3
    EMPTY_SEED = 4

    MALFORMED_MATRIX = 5
    INCONSISTENT_MATRIX = 6
    EXTENSION_FAILED = 7

    INFLATION_OVERFLOW = 8
    PROBLEM_TOO_LARGE = 9

    UNKNOWN_CONSTRUCTION = 10
    UNVERIFIABLE_CONSTRUCTION = 11

    CONFIG_ERROR = 12


class CrcError(Exception):
    def __init__(self, message: str, code: ErrorCode):
        super().__init__(message)
        self.code = code


class InvalidArgument(CrcError):
    def __init__(self, message: str):
        super().__init__(message, ErrorCode.INVALID_ARGUMENT)


class UnsupportedWeight(CrcError):
    def __init__(self, message: str):
        super().__init__(message, ErrorCode.UNSUPPORTED_WEIGHT)


class EmptyCap(CrcError):
    def __init__(self, message: str):
        super().__init__(message, ErrorCode.EMPTY_CAP)


class EmptySeed(CrcError):
    def __init__(self, message: str):
        super().__init__(message, ErrorCode.EMPTY_SEED)


class MalformedMatrix(CrcError):
    def __init__(self, message: str):
        super().__init__(message, ErrorCode.MALFORMED_MATRIX)


class InconsistentMatrix(CrcError):
    def __init__(self, message: str):
        super().__init__(message, ErrorCode.INCONSISTENT_MATRIX)


class ExtensionError(CrcError):
    def __init__(self, message: str):
        super().__init__(message, ErrorCode.EXTENSION_FAILED)


class InflationOverflow(CrcError):
    def __init__(self, message: str):
        super().__init__(message, ErrorCode.INFLATION_OVERFLOW)


class ProblemTooLarge(CrcError):
    def __init__(self, message: str):
        super().__init__(message, ErrorCode.PROBLEM_TOO_LARGE)


class UnknownConstruction(CrcError):
    def __init__(self, message: str):
        super().__init__(message, ErrorCode.UNKNOWN_CONSTRUCTION)


class UnverifiableConstruction(CrcError):
    def __init__(self, message: str):
        super().__init__(message, ErrorCode.UNVERIFIABLE_CONSTRUCTION)


class ConfigError(CrcError):
    def __init__(self, message: str):
        super().__init__(message, ErrorCode.CONFIG_ERROR)


_ERROR_CLASSES = {
    ErrorCode.INVALID_ARGUMENT: InvalidArgument,
    ErrorCode.UNSUPPORTED_WEIGHT: UnsupportedWeight,
    ErrorCode.EMPTY_CAP: EmptyCap,
    ErrorCode.EMPTY_SEED: EmptySeed,
    ErrorCode.MALFORMED_MATRIX: MalformedMatrix,
    ErrorCode.INCONSISTENT_MATRIX: InconsistentMatrix,
    ErrorCode.EXTENSION_FAILED: ExtensionError,
    ErrorCode.INFLATION_OVERFLOW: InflationOverflow,
    ErrorCode.PROBLEM_TOO_LARGE: ProblemTooLarge,
    ErrorCode.UNKNOWN_CONSTRUCTION: UnknownConstruction,
    ErrorCode.UNVERIFIABLE_CONSTRUCTION: UnverifiableConstruction,
    ErrorCode.CONFIG_ERROR: ConfigError,
}


def make_error(message: str, code: ErrorCode) -> CrcError:
    """Build the exception class registered for an error code."""
    return _ERROR_CLASSES[code](message)
