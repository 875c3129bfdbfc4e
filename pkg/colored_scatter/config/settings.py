"""Run configuration models using Pydantic."""

import hashlib
import json
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from colored_scatter.capacity.mutual_info import SnrPoint
from colored_scatter.errors import InvalidSupportError
from colored_scatter.kernel.support import AngularSupport
from colored_scatter.scatter.field import Bounce, ScatterConfig

# Fields that do not change the numbers in the CSV.
UNHASHED_FIELDS = frozenset({"output", "workers"})


def _split_list(value: Any) -> Any:
    """Accept "a,b,c" as well as YAML lists and scalars."""
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    if isinstance(value, (int, float)):
        return [value]
    return value


class RunConfig(BaseModel):
    """A full sweep: support, correlation widths, arrays, SNRs and Monte Carlo settings."""

    omega: str = "-1:-0.7,-0.15:0.15,0.7:1"
    gamma: list[float] = Field(default_factory=lambda: [0.005, 0.02, 0.1], min_length=1)
    snr_db: list[float] = Field(default_factory=lambda: [0.0, 15.0, 30.0, 45.0], min_length=1)
    antennas: list[int] = Field(default_factory=lambda: list(range(1, 100, 2)), min_length=1)
    grid_k: int = Field(default=512, ge=1)
    trials: int = Field(default=500, ge=2)
    seed: int = Field(default=0, ge=0)
    bounce: Bounce = Bounce.MULTI
    output: Path = Path("results.csv")
    workers: int = Field(default=1, ge=1)
    kernel_resolution: int = Field(default=16, ge=1)
    eta_reference: int = Field(default=49, ge=0)
    full_scale: bool = False

    @field_validator("omega", mode="before")
    @classmethod
    def validate_omega(cls, v: Any) -> str:
        try:
            if isinstance(v, str):
                support = AngularSupport.parse(v)
            else:
                support = AngularSupport.from_intervals(v)
        except InvalidSupportError as e:
            raise ValueError(e.message) from e
        return support.to_text()

    @field_validator("gamma", "snr_db", "antennas", mode="before")
    @classmethod
    def split_lists(cls, v: Any) -> Any:
        return _split_list(v)

    @field_validator("gamma")
    @classmethod
    def validate_gamma(cls, v: list[float]) -> list[float]:
        if any(not g > 0 for g in v):
            raise ValueError("correlation widths must be positive")
        return sorted(set(v))

    @field_validator("snr_db")
    @classmethod
    def validate_snr(cls, v: list[float]) -> list[float]:
        return sorted(set(v))

    @field_validator("antennas")
    @classmethod
    def validate_antennas(cls, v: list[int]) -> list[int]:
        bad = [n for n in v if n < 1 or n % 2 == 0]
        if bad:
            raise ValueError(f"antenna counts must be positive and odd, got {bad}")
        return sorted(set(v))

    @model_validator(mode="after")
    def validate_grid(self) -> "RunConfig":
        limit = 2 * self.grid_k + 1
        if max(self.antennas) > limit:
            raise ValueError(f"{max(self.antennas)} antennas exceed the {limit} grid points")
        finest = min(self.gamma)
        if finest * self.grid_k < 1.0 - 1e-12:
            raise ValueError(
                f"gamma={finest:g} is finer than the grid spacing 1/{self.grid_k}; "
                f"use grid_k >= {int(1 / finest + 0.5)}"
            )
        if self.eta_reference > self.grid_k:
            raise ValueError(f"eta_reference {self.eta_reference} exceeds grid_k {self.grid_k}")
        return self

    @property
    def support(self) -> AngularSupport:
        return AngularSupport.parse(self.omega)

    @property
    def half_counts(self) -> list[int]:
        return [(n - 1) // 2 for n in self.antennas]

    @property
    def snr_points(self) -> list[SnrPoint]:
        return [SnrPoint.from_db(db) for db in self.snr_db]

    def scatter_config(self, gamma: float) -> ScatterConfig:
        """Symmetric scattering config for one correlation width."""
        return ScatterConfig.symmetric(self.support, gamma, self.grid_k, self.bounce)

    def echo(self) -> dict[str, Any]:
        """Flat, YAML-friendly view keyed by the flag names."""
        return {
            "omega": self.omega,
            "gamma": ",".join(f"{g:.15g}" for g in self.gamma),
            "snr-db": ",".join(f"{s:.15g}" for s in self.snr_db),
            "antennas": ",".join(str(n) for n in self.antennas),
            "grid-k": self.grid_k,
            "trials": self.trials,
            "seed": self.seed,
            "bounce": self.bounce.value,
            "output": str(self.output),
            "workers": self.workers,
            "kernel-resolution": self.kernel_resolution,
            "eta-reference": self.eta_reference,
            "full-scale": self.full_scale,
        }

    def config_hash(self) -> str:
        """sha256 of the canonical JSON of every result-affecting field."""
        data = self.model_dump(mode="json", exclude=set(UNHASHED_FIELDS))
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class EnvSettings(BaseSettings):
    """Values read from COLORED_SCATTER_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="COLORED_SCATTER_",
        extra="ignore",
    )

    seed: Optional[int] = Field(default=None, ge=0)
