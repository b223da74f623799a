"""
Pydantic schemas describing a scenario and a sweep.

All models are frozen so one config object can be shared by every worker thread.
Every constant the channel model uses lives here, which keeps calibration a data
change rather than a code change.
"""
import hashlib
import json
import math
from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .arrays import ArrayKind, ArraySpec
from .geometry import NodeLayout

SUPPORTED_FREQUENCIES_GHZ = (28.0, 73.0)
MAX_SEED = 2**64 - 1


class Environment(str, Enum):
    INDOOR = "indoor"
    OUTDOOR = "outdoor"


class PhaseStrategy(str, Enum):
    DOMINANT_PAIR = "dominant_pair"
    RANDOM = "random"
    ZERO = "zero"


class PhaseMode(str, Enum):
    REOPTIMIZE = "reoptimize"
    FROZEN = "frozen"


def _lower(value):
    return value.lower() if isinstance(value, str) else value


class PathLossCoefficients(BaseModel):
    """PL = A + 10 n log10(d) + 20 log10(f_GHz) + X_sigma."""

    model_config = ConfigDict(frozen=True)

    intercept_db: float = Field(32.4, description="A")
    exponent: float = Field(..., gt=0.0, description="n")
    shadowing_sigma_db: float = Field(..., ge=0.0, description="lognormal shadowing std (dB)")


class PathLossTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    indoor_los: PathLossCoefficients = PathLossCoefficients(exponent=1.73, shadowing_sigma_db=3.0)
    indoor_nlos: PathLossCoefficients = PathLossCoefficients(exponent=3.19, shadowing_sigma_db=8.0)
    outdoor_los: PathLossCoefficients = PathLossCoefficients(exponent=2.1, shadowing_sigma_db=4.0)
    outdoor_nlos: PathLossCoefficients = PathLossCoefficients(exponent=3.19, shadowing_sigma_db=8.2)

    def lookup(self, environment: Environment, is_los: bool) -> PathLossCoefficients:
        state = "los" if is_los else "nlos"
        return getattr(self, f"{Environment(environment).value}_{state}")


class LosDistances(BaseModel):
    """p = min(d1/d, 1) (1 - exp(-d/d2)) + exp(-d/d2)."""

    model_config = ConfigDict(frozen=True)

    d1_m: float = Field(..., gt=0.0)
    d2_m: float = Field(..., gt=0.0)


class LosModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    indoor: LosDistances = LosDistances(d1_m=1.2, d2_m=4.7)
    outdoor: LosDistances = LosDistances(d1_m=18.0, d2_m=36.0)

    def lookup(self, environment: Environment) -> LosDistances:
        return getattr(self, Environment(environment).value)


class ClusterParams(BaseModel):
    """Statistics of the clustered multipath drawn for every link."""

    model_config = ConfigDict(frozen=True)

    mean_cluster_count: float = Field(1.8, gt=0.0, description="lambda_c of the Poisson cluster count")
    subrays_per_cluster: int = Field(10, ge=1, description="S")
    angular_spread_deg: float = Field(5.0, gt=0.0, description="std of Laplacian subray offsets")
    center_spread_deg: float = Field(
        30.0, ge=0.0, description="cluster centres fall within +/- this azimuth of the geometric direction"
    )
    shadow_fading_sigma_dB: Optional[float] = Field(
        None, ge=0.0, description="overrides the path-loss table sigma when set; 0 disables shadowing"
    )
    ricean_k_db: float = Field(10.0, description="LOS-to-scattered power ratio when a LOS path exists")
    los_enabled: bool = Field(True, description="allow a LOS path at all")


def default_ris_array() -> ArraySpec:
    return ArraySpec(kind=ArrayKind.UPA, nx=8, ny=8, pattern_exponent=1.0, hemisphere_cutoff=True)


def default_node_array() -> ArraySpec:
    return ArraySpec(kind=ArrayKind.UPA, nx=4, ny=4)


class ScenarioConfig(BaseModel):
    """Full description of one experiment."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    environment: Environment = Field(Environment.INDOOR)
    frequency_GHz: float = Field(28.0, gt=0.0, allow_inf_nan=False)
    layout: NodeLayout
    bs_array: ArraySpec = Field(default_factory=default_node_array)
    user_array: ArraySpec = Field(default_factory=default_node_array)
    ris_array: ArraySpec = Field(default_factory=default_ris_array)
    pt_dBm: float = Field(10.0, allow_inf_nan=False, description="transmit power")
    noise_dBm: float = Field(-100.0, allow_inf_nan=False, description="noise power sigma^2")
    realizations: int = Field(100, ge=1, description="M")
    master_seed: int = Field(1, ge=0, le=MAX_SEED)
    phase_mode: PhaseMode = Field(PhaseMode.REOPTIMIZE)
    cluster_params: ClusterParams = Field(default_factory=ClusterParams)
    path_loss: PathLossTable = Field(default_factory=PathLossTable)
    los_model: LosModel = Field(default_factory=LosModel)

    @field_validator("environment", "phase_mode", mode="before")
    @classmethod
    def _case_insensitive(cls, value):
        return _lower(value)

    @property
    def nt(self) -> int:
        return self.bs_array.num_elements

    @property
    def nr(self) -> int:
        return self.user_array.num_elements

    @property
    def n_ris(self) -> int:
        return self.ris_array.num_elements


class AngleGrid(BaseModel):
    """Inclusive start..stop grid in degrees."""

    model_config = ConfigDict(frozen=True)

    start: float = Field(0.0, allow_inf_nan=False)
    stop: float = Field(350.0, allow_inf_nan=False)
    step: float = Field(10.0, gt=0.0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _ordered(self) -> "AngleGrid":
        if self.stop < self.start:
            raise ValueError(f"grid stop {self.stop} is below start {self.start}")
        return self

    def values(self) -> np.ndarray:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return self.start + self.step * np.arange(count)


class SweepSpec(BaseModel):
    """What to sweep on top of a base scenario."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    scenario: ScenarioConfig
    azimuth: AngleGrid = Field(default_factory=AngleGrid)
    elevation: AngleGrid = Field(default_factory=AngleGrid)
    powers_dBm: List[float] = Field(default_factory=lambda: [0.0, 10.0, 20.0, 30.0, 40.0, 50.0], min_length=1)
    strategy: PhaseStrategy = Field(PhaseStrategy.DOMINANT_PAIR)
    phase_mode: Optional[PhaseMode] = Field(None, description="overrides the scenario phase mode when set")
    hold_azimuth_deg: float = Field(0.0, allow_inf_nan=False, description="phi used by elevation-only sweeps")
    hold_elevation_deg: float = Field(0.0, allow_inf_nan=False, description="theta used by azimuth-only sweeps")

    @field_validator("strategy", "phase_mode", mode="before")
    @classmethod
    def _strategy(cls, value):
        return _lower(value)

    @field_validator("powers_dBm")
    @classmethod
    def _finite_powers(cls, powers: List[float]) -> List[float]:
        if not all(math.isfinite(p) for p in powers):
            raise ValueError("transmit powers must be finite")
        return powers


def canonical_json(model: BaseModel) -> str:
    """Sorted-key, compact JSON of a fully-defaulted model."""
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))


def config_digest(model: BaseModel) -> str:
    """sha256 hex of the canonical JSON; stable under key order and omitted defaults."""
    return hashlib.sha256(canonical_json(model).encode("utf-8")).hexdigest()
