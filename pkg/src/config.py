"""
Run configuration: defaults, config file and command-line overrides.

Precedence is command-line flags > config file > PAGERANK_* environment
variables > built-in defaults.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional, Tuple, Union

import yaml
from dotenv import dotenv_values
from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.errors import AnalysisError, IoError, UsageError
from src.models import DEFAULT_SCHEDULE, DampingSchedule, NormalizationMode, TeleportKind

logger = logging.getLogger(__name__)

OutputFormat = Literal["csv", "tsv", "markdown"]

DEFAULT_LEVELS: Tuple[int, ...] = (30, 50, 100, 200, 300, 500)
DEFAULT_COMPARE_DAMPINGS: Tuple[float, ...] = (0.55, 0.15, 0.85)


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return tuple(part.strip() for part in value.split(",") if part.strip())
    return value


class RunConfig(BaseSettings):
    """Every knob of a pipeline run."""
    model_config = SettingsConfigDict(env_prefix="PAGERANK_", extra="forbid", frozen=True)

    damping: float = Field(default=0.85, ge=0.0, lt=1.0)
    schedule: Tuple[float, ...] = DEFAULT_SCHEDULE
    tolerance: float = Field(default=1e-12, gt=0)
    max_iter: int = Field(default=1000, ge=1)
    mode: NormalizationMode = "weighted"
    teleport: TeleportKind = "uniform"
    levels: Tuple[int, ...] = DEFAULT_LEVELS
    output_format: OutputFormat = "csv"
    top_k: int = Field(default=20, ge=1)
    powerlaw_bins: int = Field(default=20, ge=3)
    compare_dampings: Tuple[float, ...] = DEFAULT_COMPARE_DAMPINGS
    award_count: Optional[int] = Field(default=None, ge=1)
    workers: int = Field(default=1, ge=1)
    all_components: bool = False
    log_level: str = "INFO"

    @field_validator("schedule", "compare_dampings", "levels", mode="before")
    @classmethod
    def _parse_lists(cls, value: Any) -> Any:
        return _split_list(value)

    @field_validator("schedule", "compare_dampings")
    @classmethod
    def _valid_schedule(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        return DampingSchedule(values=value).values

    @field_validator("levels")
    @classmethod
    def _ascending_levels(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(v < 1 for v in value):
            raise ValueError("level cut points must be positive")
        if list(value) != sorted(set(value)):
            raise ValueError("level cut points must be strictly ascending")
        return value

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value}")
        return value

    def damping_schedule(self) -> DampingSchedule:
        return DampingSchedule(values=self.schedule)


def _flatten(data: Mapping[str, Any]) -> Dict[str, Any]:
    """Lift keys out of one level of YAML sections."""
    flat: Dict[str, Any] = {}
    for key, value in data.items():
        if isinstance(value, Mapping):
            flat.update(value)
        else:
            flat[key] = value
    return flat


def read_config_file(config_path: Union[str, Path]) -> Dict[str, Any]:
    """Load a YAML config (.yaml/.yml) or a plain `key = value` file."""
    path = Path(config_path)
    if not path.is_file():
        raise IoError(f"Config file {path} does not exist")
    try:
        if path.suffix in (".yaml", ".yml"):
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
            if not isinstance(data, Mapping):
                raise UsageError(f"Config file {path} must contain a mapping")
            values = _flatten(data)
        else:
            values = dict(dotenv_values(path))
    except yaml.YAMLError as e:
        raise UsageError(f"Cannot parse config file {path}: {e}") from e

    # blank values in key = value files mean "use the default"
    return {k: v for k, v in values.items() if v is not None and v != ""}


def load_run_config(config_path: Optional[Union[str, Path]] = None,
                    overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """
    Build the effective RunConfig.

    Args:
        config_path: Optional YAML or key = value file
        overrides: Values from command-line flags; None entries are ignored

    Returns:
        Validated configuration
    """
    values: Dict[str, Any] = {}
    if config_path:
        values.update(read_config_file(config_path))
        logger.debug(f"Loaded {len(values)} settings from {config_path}")
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return RunConfig(**values)
    except ValidationError as e:
        raise UsageError(f"Invalid configuration: {e}") from e
    except AnalysisError as e:
        raise UsageError(f"Invalid configuration: {e.message}") from e
