"""Settings module for htmobility.

Приоритет загрузки RunConfig: CLI flags > YAML config file > Environment > Defaults.
"""

from collections.abc import Mapping
from datetime import date
from pathlib import Path
from typing import Any, Literal
from zoneinfo import ZoneInfo, ZoneInfoNotFoundError

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src import __version__
from src.errors import ConfigError

DatasetKind = Literal["cdr", "wifi", "normalized"]
TimestampFormat = Literal["auto", "iso", "epoch"]
ActiveMode = Literal["strict", "fraction"]
DTotalMode = Literal["active-days", "window-span"]
AveragingMode = Literal["macro", "micro"]


def resolve_timezone(name: str) -> ZoneInfo:
    """Resolve an IANA timezone name, raising ValueError for unknown names."""
    try:
        return ZoneInfo(name)
    except (ZoneInfoNotFoundError, ValueError) as e:
        raise ValueError(f"unknown timezone '{name}'") from e


class ServiceSettings(BaseSettings):
    """Service identity and logging settings (env + .env)."""

    model_config = SettingsConfigDict(env_prefix="HTMOB_", env_file=".env", extra="ignore")

    environment: str = "dev"
    service_name: str = "htmobility"
    service_version: str = __version__
    log_level: Literal["trace", "debug", "info", "warn", "error"] = "warn"


class ColumnMap(BaseModel):
    """Header names of the CDR columns and how to read the timestamp column."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    user_id: str = "user_id"
    timestamp: str = "timestamp"
    place_id: str = "place_id"
    channel: str = "channel"
    delimiter: str = Field(default=",", min_length=1, max_length=1)
    timestamp_format: TimestampFormat = "auto"


class KMeansConfig(BaseModel):
    """K-means baseline parameters."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    k: int = Field(default=3, ge=1)
    restarts: int = Field(default=16, ge=1)
    tol: float = Field(default=1e-9, gt=0)
    max_iter: int = Field(default=200, ge=1)


class RunConfig(BaseSettings):
    """Configuration of one analysis run.

    Defaults: stays longer than 15 min, strict daily activity, 40% head limit.
    """

    model_config = SettingsConfigDict(
        env_prefix="HTMOB_",
        env_nested_delimiter="__",
        extra="forbid",
        frozen=True,
    )

    # Входные данные
    inputs: list[Path] = Field(default_factory=list)
    kind: DatasetKind = "cdr"
    timezone: str = "UTC"
    columns: ColumnMap = Field(default_factory=ColumnMap)
    max_malformed_fraction: float = Field(default=0.10, ge=0.0, le=1.0)
    window_start: date | None = None
    window_end: date | None = None

    # Preprocess
    min_pause: int = Field(default=900, ge=0)
    merge_gap: int = Field(default=60, ge=0)
    active_mode: ActiveMode = "strict"
    active_fraction: float = Field(default=1.0, gt=0.0, le=1.0)

    # Relevance / Head-Tail breaks
    d_total_mode: DTotalMode = "active-days"
    head_limit: float = Field(default=0.40, gt=0.0, lt=1.0)

    # Analytics
    averaging: AveragingMode = "macro"
    focus_groups: list[int] = Field(default_factory=lambda: [2, 3])
    kmeans: KMeansConfig = Field(default_factory=KMeansConfig)
    comparison: bool = True
    # Ground-truth CSV of a synthetic cohort; when set, recovery is scored
    truth: Path | None = None

    # Выход и исполнение
    out_dir: Path = Path("out")
    seed: int = 0
    workers: int = Field(default=1, ge=1)

    @field_validator("timezone")
    @classmethod
    def _check_timezone(cls, value: str) -> str:
        resolve_timezone(value)
        return value

    @field_validator("focus_groups")
    @classmethod
    def _check_focus_groups(cls, value: list[int]) -> list[int]:
        if any(g < 1 for g in value):
            raise ValueError("focus groups are ht-index values and must be >= 1")
        return sorted(set(value))

    @model_validator(mode="after")
    def _check_window(self) -> "RunConfig":
        if self.window_start and self.window_end and self.window_start > self.window_end:
            raise ValueError("window_start must not be after window_end")
        return self

    @property
    def zone(self) -> ZoneInfo:
        """Resolved timezone used for calendar-day boundaries."""
        return resolve_timezone(self.timezone)

    def echo(self) -> dict[str, Any]:
        """JSON-compatible dump that reproduces this config when loaded back."""
        return self.model_dump(mode="json")


def _deep_merge(base: dict[str, Any], overrides: Mapping[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = _deep_merge(dict(merged[key]), value)
        else:
            merged[key] = value
    return merged


def read_yaml_mapping(path: Path) -> dict[str, Any]:
    """Read a YAML document that must be a mapping (run configs and cohort specs)."""
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e.strerror or e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"config file {path} is not valid YAML: {e}") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must contain a mapping at top level")
    return data


def validation_message(err: ValidationError) -> str:
    """Collapse a pydantic ValidationError into one readable sentence."""
    parts = []
    for item in err.errors():
        loc = ".".join(str(p) for p in item["loc"]) or "<root>"
        parts.append(f"{loc}: {item['msg']}")
    return "; ".join(parts)


def load_run_config(
    config_file: Path | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> RunConfig:
    """
    Build RunConfig from a YAML config file and CLI overrides.

    Args:
        config_file: Optional YAML file with any RunConfig field
        overrides: Values from CLI flags (None values are ignored)

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: If the file or any value is invalid
    """
    data: dict[str, Any] = read_yaml_mapping(config_file) if config_file else {}
    # Echoed reports carry the config under "config"
    if "config" in data and isinstance(data["config"], dict) and "schema_version" in data:
        data = data["config"]
    data = _deep_merge(data, overrides or {})

    try:
        return RunConfig(**data)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {validation_message(e)}") from e
