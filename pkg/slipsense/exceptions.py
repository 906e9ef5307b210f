"""Custom exceptions for the slipsense package.

This module defines custom exception classes for better error handling
and debugging throughout the slipsense package.
"""


class SlipSenseException(Exception):
    """Base exception class for all slipsense-related exceptions."""
    pass


# Grid Exceptions
class GridException(SlipSenseException):
    """Base exception for taxel grid errors."""
    pass


class FrameDimensionException(GridException):
    """Raised when a frame's field dimensions do not match the grid spec."""
    pass


# Sequence Exceptions
class SequenceException(SlipSenseException):
    """Base exception for frame sequence errors."""
    pass


class TimestampRegressionException(SequenceException):
    """Raised when a frame arrives with an earlier timestamp than its predecessor."""
    pass


# Simulation Exceptions
class SimulationException(SlipSenseException):
    """Base exception for contact simulation errors."""
    pass


class ContactOutsideGridException(SimulationException):
    """Raised when the contact disc does not fit within the taxel grid."""
    pass


class UnresolvedContactException(SimulationException):
    """Raised when the contact disc covers no taxel centre."""
    pass


class NegativeLoadException(SimulationException):
    """Raised when a tangential load or torque is negative."""
    pass


class InvalidScenarioException(SimulationException):
    """Raised when a scenario specification is invalid."""
    pass


class UnknownPresetException(SimulationException):
    """Raised when a scenario preset name is not registered."""
    pass


# Detection Exceptions
class DetectionException(SlipSenseException):
    """Base exception for slip detector errors."""
    pass


class UnknownDetectorException(DetectionException):
    """Raised when an unsupported detector kind is requested."""
    pass


# Evaluation Exceptions
class EvaluationException(SlipSenseException):
    """Base exception for evaluation errors."""
    pass


class ScoringMismatchException(EvaluationException):
    """Raised when predictions do not line up with the labeled sequence."""
    pass


class EmptyRunListException(EvaluationException):
    """Raised when averaging an empty list of reports."""
    pass


class MixedConfigException(EvaluationException):
    """Raised when averaging reports from different detectors or configurations."""
    pass


# Frame File Exceptions
class FrameFileException(SlipSenseException):
    """Base exception for frame file reading and writing."""
    pass


class BadMagicException(FrameFileException):
    """Raised when a frame file does not start with the expected magic tag."""
    pass


class TruncatedPayloadException(FrameFileException):
    """Raised when a frame file is shorter than its header declares."""

    def __init__(self, message: str, expected: int, actual: int):
        super().__init__(f"{message} (expected {expected} bytes, got {actual})")
        self.expected = expected
        self.actual = actual


class NonFiniteValueException(FrameFileException):
    """Raised when a frame file contains NaN or infinite values."""
    pass


class HeaderMismatchException(FrameFileException):
    """Raised when header fields disagree with the payload or the sequence."""
    pass


# Configuration Exceptions
class ConfigurationException(SlipSenseException):
    """Base exception for configuration errors."""
    pass


class InvalidConfigurationException(ConfigurationException):
    """Raised when configuration values are invalid."""
    pass


# Utility function for exception handling
def handle_exception(exception: Exception, context: str = "") -> str:
    """
    Utility function to format exception messages consistently.

    Args:
        exception: The exception that was raised
        context: Additional context about where the exception occurred

    Returns:
        Formatted error message
    """
    error_type = type(exception).__name__
    error_message = str(exception)

    if context:
        return f"[{error_type}] in {context}: {error_message}"
    return f"[{error_type}]: {error_message}"
