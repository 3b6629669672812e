"""Request/response models for the HTTP boundary.

Everything here is wire-format plumbing: field bounds mirror the core
dataclass invariants (and the shared JSON schema the browser client
validates against) so a request that passes this layer constructs core
objects without surprises. Core modules never import from here.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import physics
from .designer import (
    DesignDefaults,
    DesignRequirements,
    EvaluationConfig,
)

_Weights = tuple[float, float, float, float, float, float, float]


class DefaultsOverride(BaseModel):
    """Optional overrides for individual DesignDefaults fields."""

    model_config = ConfigDict(extra="forbid")

    airframe_ratio: float | None = Field(None, gt=0, lt=0.5)
    discharge_ratio: float | None = Field(None, gt=0, lt=1)
    other_current: float | None = Field(None, ge=0)
    battery_margin: float | None = Field(None, ge=1.5)
    prop_gap: float | None = Field(None, ge=1.0, le=1.5)
    gravity: float | None = Field(None, gt=0)
    screening_tolerance: float | None = Field(None, gt=0, le=1)

    def build(self) -> DesignDefaults:
        overrides = {
            k: v for k, v in self.model_dump().items() if v is not None
        }
        return DesignDefaults(**overrides)


class DesignRequest(BaseModel):
    """One design query: mission requirements plus tuning overrides.

    Exactly one of air_density / altitude must be set.
    """

    model_config = ConfigDict(extra="forbid")

    hover_time: float = Field(..., gt=0, le=600, description="minutes")
    payload: float = Field(..., gt=0, le=1000, description="kg")
    thrust_ratio: float = Field(..., gt=0, lt=1)
    rotor_count: int = Field(..., ge=3, le=16)
    air_density: float | None = Field(None, gt=0, le=1.5, description="kg/m^3")
    altitude: float | None = Field(None, ge=0, lt=20000, description="m")
    battery_density: float = Field(..., gt=0, le=2000, description="Wh/kg")
    screening_mode: Literal["time", "payload", "ratio"] = "time"
    layout: Literal["common", "coaxial"] = "common"
    top_n: int = Field(8, ge=1, le=100)
    weights: _Weights | None = None
    defaults: DefaultsOverride | None = None

    @model_validator(mode="after")
    def _check(self) -> "DesignRequest":
        if (self.air_density is None) == (self.altitude is None):
            raise ValueError("exactly one of air_density or altitude is required")
        n = self.rotor_count
        if n > 4 and n % 2 != 0:
            raise ValueError("rotor_count above 4 must be even")
        if self.weights is not None and any(
            not 0 < w <= 1000 for w in self.weights
        ):
            raise ValueError("weights must each be within (0, 1000]")
        return self

    def resolved_density(self) -> float:
        if self.air_density is not None:
            return self.air_density
        return physics.air_density(self.altitude)

    def requirements(self) -> DesignRequirements:
        return DesignRequirements(
            hover_time=self.hover_time,
            payload=self.payload,
            thrust_ratio=self.thrust_ratio,
            rotor_count=self.rotor_count,
            air_density=self.resolved_density(),
            battery_density=self.battery_density,
            screening_mode=self.screening_mode,
            layout=self.layout,
        )

    def design_defaults(self) -> DesignDefaults:
        if self.defaults is None:
            return DesignDefaults()
        return self.defaults.build()

    def evaluation_config(self) -> EvaluationConfig:
        if self.weights is None:
            return EvaluationConfig()
        return EvaluationConfig(weights=tuple(self.weights))
