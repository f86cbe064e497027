"""
Configuration settings for the KHA engine.

This module handles configuration from environment variables and .env files,
and provides the validated per-run configuration used by the command line.
"""

import importlib.util
from typing import Any, Literal, Optional, Tuple

try:
    from dotenv import load_dotenv
    # Load .env file if it exists
    load_dotenv()
except ImportError:
    # dotenv is optional - we can work without it
    pass

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# Version
VERSION = "0.1.0"

VALID_LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
VALID_FORMATS = ["text", "json"]


class Settings(BaseSettings):
    """Configuration settings for the KHA engine."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore"
    )

    # Logging Configuration
    LOG_LEVEL: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)"
    )

    # Resource caps
    MAX_ALPHA_SUM: int = Field(
        default=4,
        description="Largest total dimension |alpha| accepted by rank certificates"
    )

    MAX_M: int = Field(
        default=6,
        description="Largest loop degree m accepted by rank certificates"
    )

    MAX_FLAG_N: int = Field(
        default=3,
        description="Largest number of flag steps n accepted by flag-variety checks"
    )

    MAX_FLAG_POINTS: int = Field(
        default=4,
        description="Largest ambient dimension N accepted by flag-variety checks"
    )

    MAX_ORBIT_COORDINATES: int = Field(
        default=5000,
        description="Largest orbit coordinate space a rank computation may build"
    )

    # Run defaults
    DEFAULT_SEED: int = Field(
        default=20251,
        description="Seed used by randomized property suites when none is given"
    )

    DEFAULT_WINDOW_LOW: int = Field(
        default=-3,
        description="Lower end of the default loop-degree window"
    )

    DEFAULT_WINDOW_HIGH: int = Field(
        default=3,
        description="Upper end of the default loop-degree window"
    )

    OUTPUT_FORMAT: str = Field(
        default="text",
        description="Default output format (text or json)"
    )

    # Execution
    WORKERS: int = Field(
        default=4,
        description="Worker threads used for independent checks"
    )

    CHECK_TIMEOUT: int = Field(
        default=1800,
        description="Timeout for a single command in seconds"
    )

    VERIFY_ADJUNCTIONS: bool = Field(
        default=True,
        description="Re-check the adjunction identity after every adjoint construction"
    )

    CHECK_REWRITE_POTENTIAL: bool = Field(
        default=False,
        description="Assert the termination potential on every rewrite step"
    )

    @field_validator("LOG_LEVEL")
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        if v.upper() not in VALID_LOG_LEVELS:
            raise ValueError(f"log_level must be one of {VALID_LOG_LEVELS}")
        return v.upper()

    @field_validator("OUTPUT_FORMAT")
    def validate_output_format(cls, v: str) -> str:
        """Validate output format."""
        if v.lower() not in VALID_FORMATS:
            raise ValueError(f"output_format must be one of {VALID_FORMATS}")
        return v.lower()

    @field_validator(
        "MAX_ALPHA_SUM",
        "MAX_M",
        "MAX_FLAG_N",
        "MAX_FLAG_POINTS",
        "MAX_ORBIT_COORDINATES",
        "WORKERS",
        "CHECK_TIMEOUT",
    )
    def validate_positive(cls, v: int) -> int:
        """Validate caps and limits."""
        if v <= 0:
            raise ValueError("caps and limits must be positive")
        return v

    @model_validator(mode="after")
    def validate_window(self) -> "Settings":
        """Validate the default degree window."""
        if self.DEFAULT_WINDOW_LOW > self.DEFAULT_WINDOW_HIGH:
            raise ValueError("default window must satisfy low <= high")
        return self

    @property
    def log_level(self) -> str:
        return self.LOG_LEVEL

    @property
    def max_alpha_sum(self) -> int:
        return self.MAX_ALPHA_SUM

    @property
    def max_m(self) -> int:
        return self.MAX_M

    @property
    def max_flag_n(self) -> int:
        return self.MAX_FLAG_N

    @property
    def max_flag_points(self) -> int:
        return self.MAX_FLAG_POINTS

    @property
    def max_orbit_coordinates(self) -> int:
        return self.MAX_ORBIT_COORDINATES

    @property
    def default_seed(self) -> int:
        return self.DEFAULT_SEED

    @property
    def default_window(self) -> Tuple[int, int]:
        return (self.DEFAULT_WINDOW_LOW, self.DEFAULT_WINDOW_HIGH)

    @property
    def output_format(self) -> str:
        return self.OUTPUT_FORMAT

    @property
    def workers(self) -> int:
        return self.WORKERS

    @property
    def check_timeout(self) -> int:
        return self.CHECK_TIMEOUT

    @property
    def verify_adjunctions(self) -> bool:
        return self.VERIFY_ADJUNCTIONS

    @property
    def check_rewrite_potential(self) -> bool:
        return self.CHECK_REWRITE_POTENTIAL


# Create global settings instance
settings = Settings()


class Caps(BaseModel):
    """Resource caps for one run."""

    max_alpha_sum: int = Field(gt=0)
    max_m: int = Field(gt=0)
    max_flag_n: int = Field(gt=0)
    max_flag_points: int = Field(gt=0)
    max_orbit_coordinates: int = Field(gt=0)


class Config(BaseModel):
    """Validated configuration of a single command-line run."""

    n: int = Field(default=1, ge=1)
    N: Optional[int] = Field(default=None, ge=1)
    degree_window: Tuple[int, int]
    caps: Caps
    format: Literal["text", "json"] = "text"
    seed: int

    @field_validator("degree_window")
    def validate_degree_window(cls, v: Tuple[int, int]) -> Tuple[int, int]:
        """Validate the loop-degree window."""
        if v[0] > v[1]:
            raise ValueError("degree_window must satisfy low <= high")
        return v


def default_caps() -> Caps:
    """
    Build the caps configured in the environment.

    Returns:
        Caps instance mirroring the current settings
    """
    return Caps(
        max_alpha_sum=settings.max_alpha_sum,
        max_m=settings.max_m,
        max_flag_n=settings.max_flag_n,
        max_flag_points=settings.max_flag_points,
        max_orbit_coordinates=settings.max_orbit_coordinates,
    )


def build_config(**overrides: Any) -> Config:
    """
    Build a run configuration, filling unspecified values from settings.

    Args:
        **overrides: Config fields given explicitly (None values are ignored)

    Returns:
        Validated Config

    Raises:
        pydantic.ValidationError: If any value is out of range
    """
    values: dict[str, Any] = {
        "degree_window": settings.default_window,
        "caps": default_caps(),
        "format": settings.output_format,
        "seed": settings.default_seed,
    }
    values.update({key: value for key, value in overrides.items() if value is not None})
    return Config(**values)


def get_engine_info() -> dict[str, str]:
    """
    Get a summary of the active configuration for logging.

    Returns:
        Dictionary with configuration information
    """
    return {
        "version": VERSION,
        "log_level": settings.log_level,
        "caps": f"|alpha|<={settings.max_alpha_sum}, m<={settings.max_m}, "
        f"flag n<={settings.max_flag_n}, N<={settings.max_flag_points}",
        "workers": str(settings.workers),
        "timeout": f"{settings.check_timeout}s",
    }


def validate_configuration() -> tuple[bool, str]:
    """
    Validate the current configuration.

    Returns:
        Tuple of (is_valid, message)
    """
    try:
        # Test basic settings validation
        settings.model_validate(settings.model_dump())

        if settings.max_flag_n < 2:
            return False, "MAX_FLAG_N must be at least 2 for flag-variety checks"

        if importlib.util.find_spec("sympy") is None:
            return False, "sympy is not installed"

        return True, "Configuration is valid"

    except Exception as e:
        return False, f"Configuration validation failed: {str(e)}"
