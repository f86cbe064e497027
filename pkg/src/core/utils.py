"""
Utility functions for the KHA engine.

This module provides common utilities for logging, error handling,
and data processing.
"""

import json
import logging
import sys
from typing import Any, ClassVar, Dict, List, Optional, Tuple, Union

from src.core.config import settings


def setup_logging(level: Optional[str] = None) -> logging.Logger:
    """
    Set up logging configuration for the engine.

    Args:
        level: Log level overriding settings.log_level

    Returns:
        Configured logger instance
    """
    level = (level or settings.log_level).upper()

    # Configure root logger
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.StreamHandler(sys.stderr),  # stdout is reserved for command output
        ],
    )

    # Create and return logger for this module
    logger = logging.getLogger("kha_engine")
    logger.setLevel(getattr(logging, level))

    return logger


class EngineError(Exception):
    """Exception raised for errors in engine operations."""

    default_exit_code: ClassVar[int] = 1

    def __init__(
        self,
        message: str,
        operation: str = "",
        exit_code: Optional[int] = None,
        details: str = "",
    ):
        self.message = message
        self.operation = operation
        self.exit_code = self.default_exit_code if exit_code is None else exit_code
        self.details = details
        super().__init__(self.message)

    def __str__(self) -> str:
        return f"Engine Error: {self.message} (exit code {self.exit_code})"


class UsageError(EngineError):
    """Malformed command-line arguments or inputs."""

    default_exit_code = 2


class ParseError(UsageError):
    """Text or JSON input that does not match its grammar."""


class InvalidPermutationError(UsageError):
    """A slot permutation that is not a bijection or mixes vertices."""


class NegativeDegreeError(UsageError):
    """A positive-sector query with negative loop degree."""


class InvalidCompositionError(UsageError):
    """A weight that does not have the shape of a composition of N."""


class GradeMismatchError(UsageError):
    """Inputs whose dimension vectors do not fit the requested operation."""


class AsymmetricPolynomialError(UsageError):
    """A polynomial that is not invariant under the symmetric group of its grade."""


class InexactDivisionError(EngineError):
    """Exact division with a nonzero remainder."""


class NonPolynomialSymmetrizationError(EngineError):
    """A symmetrization whose denominator does not clear."""


class RewritingError(EngineError):
    """A rewrite step that does not decrease the termination potential."""


class SingularGramError(EngineError):
    """An Euler-pairing Gram matrix that is not invertible."""


class AdjunctionError(EngineError):
    """A constructed adjoint that fails the adjunction identity."""


class ResourceCapError(EngineError):
    """A computation whose size exceeds the configured caps."""

    default_exit_code = 3


class CheckTimeoutError(ResourceCapError):
    """A computation that ran past the configured timeout."""


def format_response(
    success: bool,
    data: Optional[Union[Dict[str, Any], List[Any]]] = None,
    error: Optional[str] = None,
    metadata: Optional[Dict[str, Any]] = None
) -> Dict[str, Any]:
    """
    Format a command response for JSON output.

    Args:
        success: Whether every check passed
        data: The response data
        error: Error message if the command failed
        metadata: Additional metadata

    Returns:
        Formatted response dictionary
    """
    response: Dict[str, Any] = {"success": success}

    if data is not None:
        response["data"] = data

    if not success and error:
        response["error"] = error

    if metadata:
        response["metadata"] = metadata

    return response


def parse_json_input(text: str, source: str = "input") -> Any:
    """
    Parse JSON input with error handling.

    Args:
        text: Raw input string
        source: Name of the input for error messages

    Returns:
        Parsed JSON data

    Raises:
        ParseError: If the text is empty or not valid JSON
    """
    if not text.strip():
        raise ParseError(f"No data in {source}", operation="parse_json_input")

    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"Failed to parse JSON in {source}: {str(e)}",
            operation="parse_json_input",
            details=truncate_output(text, 1000),
        )


def dump_json(data: Any) -> str:
    """
    Serialize data deterministically.

    Args:
        data: JSON-serializable data

    Returns:
        JSON text with sorted keys
    """
    return json.dumps(data, indent=2, sort_keys=True)


def truncate_output(output: str, max_length: int = 5000) -> str:
    """
    Shorten raw input echoed into an error's details.

    Args:
        output: Offending input text
        max_length: Characters kept before the marker

    Returns:
        The text, cut at max_length and marked when longer
    """
    if len(output) <= max_length:
        return output

    return output[:max_length] + "... [output truncated]"


def parse_int_list(text: str, name: str) -> Tuple[int, ...]:
    """
    Parse a comma-separated list of integers such as "1,1,0".

    Args:
        text: Raw argument
        name: Argument name for error messages

    Returns:
        Tuple of integers

    Raises:
        UsageError: If any entry is not an integer
    """
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise UsageError(f"{name} must be a comma-separated list of integers, got {text!r}")


def parse_window(text: str) -> Tuple[int, int]:
    """
    Parse a loop-degree window of the form "lo:hi".

    Args:
        text: Raw argument

    Returns:
        Tuple (lo, hi)

    Raises:
        UsageError: If the text is malformed or lo > hi
    """
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"window must look like lo:hi, got {text!r}")
    try:
        low, high = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"window bounds must be integers, got {text!r}")
    if low > high:
        raise UsageError(f"window must satisfy lo <= hi, got {text!r}")
    return low, high
