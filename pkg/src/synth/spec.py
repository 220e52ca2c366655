"""Synthetic cohort specification."""

from datetime import date
from pathlib import Path
from typing import Literal, Self

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.config.settings import read_yaml_mapping, resolve_timezone, validation_message
from src.domain.classification import PlaceLabel
from src.domain.events import CDR_CHANNELS, Channel
from src.errors import ConfigError

SynthMode = Literal["cdr", "wifi"]
MAX_WIFI_PLACES = 1440  # one visit slot per minute of the day


class TierSpec(BaseModel):
    """Places of one relevance tier: how many, how often visited, how long stayed."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    count: int = Field(ge=0)
    p_min: float = Field(gt=0.0, le=1.0)
    p_max: float = Field(gt=0.0, le=1.0)
    duration_minutes: float = Field(gt=0.0)

    @model_validator(mode="after")
    def _ordered(self) -> Self:
        if self.p_min > self.p_max:
            raise ValueError(f"p_min ({self.p_min}) exceeds p_max ({self.p_max})")
        return self


def _default_mvp() -> TierSpec:
    return TierSpec(count=2, p_min=0.8, p_max=1.0, duration_minutes=240.0)


def _default_ovp() -> TierSpec:
    return TierSpec(count=5, p_min=0.2, p_max=0.4, duration_minutes=90.0)


def _default_evp() -> TierSpec:
    return TierSpec(count=50, p_min=0.01, p_max=0.05, duration_minutes=40.0)


class CohortSpec(BaseModel):
    """
    Planted structure of a synthetic cohort.

    Each user gets mvp/ovp/evp places drawn from a shared pool of
    `place_pool` ids; every (place, day) is visited independently with the
    place's probability, itself drawn uniformly from its tier range.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    mode: SynthMode = "cdr"
    user_count: int = Field(default=500, ge=1)
    window_days: int = Field(default=60, ge=1)
    start_day: date = date(2024, 1, 1)
    timezone: str = "UTC"
    mvp: TierSpec = Field(default_factory=_default_mvp)
    ovp: TierSpec = Field(default_factory=_default_ovp)
    evp: TierSpec = Field(default_factory=_default_evp)
    place_pool: int = Field(default=5000, ge=1)
    channel_mix: dict[Channel, float] = Field(
        default_factory=lambda: {Channel.CALL: 0.4, Channel.SMS: 0.2, Channel.DATA: 0.4}
    )
    daily_activity: bool = True
    seed: int = 0

    @field_validator("timezone")
    @classmethod
    def _known_timezone(cls, v: str) -> str:
        resolve_timezone(v)
        return v

    @field_validator("channel_mix")
    @classmethod
    def _cdr_channels(cls, v: dict[Channel, float]) -> dict[Channel, float]:
        if not v:
            raise ValueError("channel_mix must name at least one channel")
        for channel, weight in v.items():
            if channel not in CDR_CHANNELS:
                raise ValueError(f"'{channel}' is not a CDR channel")
            if weight <= 0:
                raise ValueError(f"channel weight must be positive, got {weight} for '{channel}'")
        return v

    @model_validator(mode="after")
    def _enough_places(self) -> Self:
        if self.places_per_user == 0:
            raise ValueError("cohort has no places: every tier count is 0")
        if self.places_per_user > self.place_pool:
            raise ValueError(
                f"place_pool ({self.place_pool}) is smaller than places per user ({self.places_per_user})"
            )
        if self.mode == "wifi" and self.places_per_user > MAX_WIFI_PLACES:
            raise ValueError(f"wifi mode supports at most {MAX_WIFI_PLACES} places per user")
        return self

    @property
    def tiers(self) -> dict[PlaceLabel, TierSpec]:
        """Tiers from most to least visited."""
        return {PlaceLabel.MVP: self.mvp, PlaceLabel.OVP: self.ovp, PlaceLabel.EVP: self.evp}

    @property
    def places_per_user(self) -> int:
        return self.mvp.count + self.ovp.count + self.evp.count

    @property
    def expected_ht_index(self) -> int:
        """Number of populated tiers (3 for the full MVP/OVP/EVP geometry)."""
        return sum(1 for tier in self.tiers.values() if tier.count > 0)


def load_cohort_spec(path: Path | None = None, seed: int | None = None) -> CohortSpec:
    """
    Load a cohort spec from YAML; no path gives the default spec.

    Args:
        path: YAML file with CohortSpec fields
        seed: Overrides the file's seed when given

    Raises:
        ConfigError: Unreadable file or invalid spec
    """
    data = read_yaml_mapping(path) if path is not None else {}
    if seed is not None:
        data["seed"] = seed
    try:
        return CohortSpec.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid cohort spec: {validation_message(e)}") from e
