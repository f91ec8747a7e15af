"""Configuration management for statecover."""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

from .exceptions import ConfigurationError

# Load environment variables from .env file if it exists
load_dotenv()

VALID_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
VALID_LOG_FORMATS = ("json", "text")


class StatecoverConfig(BaseModel):
    """Process-wide settings shared by every command."""

    suite_cap: int = Field(
        default=100000,
        description="Maximum number of generated test cases",
    )
    gtsp_exact_limit: int = Field(
        default=12,
        description="Largest graph (vertices) the covering walk is solved exactly for",
    )
    path_bound: Optional[int] = Field(
        default=None,
        description="Default longest complete path counted by path coverage",
    )
    log_level: str = Field(default="WARNING", description="Logging level")
    log_format: str = Field(default="text", description="Log format (json or text)")

    @field_validator("suite_cap")
    @classmethod
    def validate_suite_cap(cls, v: int) -> int:
        """Validate suite cap."""
        if v < 1:
            raise ValueError("Suite cap must be at least 1")
        return v

    @field_validator("gtsp_exact_limit")
    @classmethod
    def validate_exact_limit(cls, v: int) -> int:
        """Validate exact solver limit; the exact solver is exponential in it."""
        if not 1 <= v <= 16:
            raise ValueError("Exact solver limit must be between 1 and 16")
        return v

    @field_validator("path_bound")
    @classmethod
    def validate_path_bound(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 1:
            raise ValueError("Path bound must be at least 1")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        v_upper = v.upper()
        if v_upper not in VALID_LOG_LEVELS:
            raise ValueError(f"Log level must be one of: {', '.join(VALID_LOG_LEVELS)}")
        return v_upper

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Validate log format."""
        v_lower = v.lower()
        if v_lower not in VALID_LOG_FORMATS:
            raise ValueError(f"Log format must be one of: {', '.join(VALID_LOG_FORMATS)}")
        return v_lower

    @classmethod
    def from_env_and_file(cls, config_path: Optional[Path] = None) -> "StatecoverConfig":
        """Create configuration from defaults, an optional JSON file and the environment.

        Environment variables take precedence over config file values.

        Args:
            config_path: Optional path to JSON configuration file

        Raises:
            ConfigurationError: If the file is missing or malformed, or a value is invalid
        """
        config_data: Dict[str, Any] = {}

        if config_path:
            if not config_path.exists():
                raise ConfigurationError(f"Configuration file not found: {config_path}")
            try:
                with open(config_path, "r", encoding="utf-8") as f:
                    file_config = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigurationError(f"Invalid JSON in configuration file {config_path}: {e}") from e
            except OSError as e:
                raise ConfigurationError(f"Error reading configuration file {config_path}: {e}") from e
            if not isinstance(file_config, dict):
                raise ConfigurationError(
                    f"Configuration file must contain a JSON object, got {type(file_config).__name__}"
                )
            config_data.update(file_config)

        env_mappings = {
            "STATECOVER_CAP": ("suite_cap", int),
            "STATECOVER_GTSP_EXACT_LIMIT": ("gtsp_exact_limit", int),
            "STATECOVER_PATH_BOUND": ("path_bound", int),
            "STATECOVER_LOG_LEVEL": ("log_level", str),
            "STATECOVER_LOG_FORMAT": ("log_format", str),
        }
        for env_var, (config_key, value_type) in env_mappings.items():
            env_value = os.getenv(env_var)
            if env_value is None or not env_value.strip():
                continue
            try:
                config_data[config_key] = value_type(env_value.strip())
            except (ValueError, TypeError) as e:
                raise ConfigurationError(
                    f"Invalid value for {env_var}: '{env_value}' (expected {value_type.__name__})",
                    config_key=env_var,
                    config_value=env_value,
                ) from e

        try:
            return cls(**config_data)
        except ValidationError as e:
            error = e.errors()[0]
            field = ".".join(str(x) for x in error["loc"])
            raise ConfigurationError(f"Invalid configuration for {field}: {error['msg']}", config_key=field) from e
