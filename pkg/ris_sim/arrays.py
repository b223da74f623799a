"""
Element layouts, steering vectors and element patterns for ULA/UPA apertures.

Every array lies in its local y-z plane with boresight along local +x. Positions
are expressed in wavelengths and the phase reference is element (0, 0), so no
centering offset is applied.
"""
import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import InvalidInputError
from .geometry import direction_from_angles

HALF_PI = math.pi / 2.0


class ArrayKind(str, Enum):
    ULA = "ULA"
    UPA = "UPA"


class ArraySpec(BaseModel):
    """Geometry and element pattern of one antenna array or RIS panel."""

    model_config = ConfigDict(frozen=True)

    kind: ArrayKind = Field(ArrayKind.UPA, description="ULA or UPA")
    nx: int = Field(1, ge=1, description="elements along local y (columns)")
    ny: int = Field(1, ge=1, description="elements along local z (rows); forced to 1 for a ULA")
    spacing_wavelengths: float = Field(0.5, gt=0.0, allow_inf_nan=False)
    pattern_exponent: float = Field(0.0, ge=0.0, allow_inf_nan=False, description="q in cos^q")
    hemisphere_cutoff: bool = Field(False, description="zero gain behind the aperture")

    @model_validator(mode="before")
    @classmethod
    def _ula_is_one_row(cls, data):
        if isinstance(data, dict):
            raw = data.get("kind", ArrayKind.UPA)
            kind = str(getattr(raw, "value", raw)).upper()
            data = {**data, "kind": kind}
            if kind == ArrayKind.ULA.value:
                data["ny"] = 1
        return data

    @property
    def num_elements(self) -> int:
        return self.nx * self.ny


def element_positions(spec: ArraySpec) -> np.ndarray:
    """(N, 3) local positions in wavelengths; index n = row * nx + column."""
    rows, cols = np.meshgrid(np.arange(spec.ny), np.arange(spec.nx), indexing="ij")
    positions = np.zeros((spec.num_elements, 3))
    positions[:, 1] = cols.ravel() * spec.spacing_wavelengths
    positions[:, 2] = rows.ravel() * spec.spacing_wavelengths
    return positions


def steering_vector(spec: ArraySpec, azimuth_rad: float, elevation_rad: float) -> np.ndarray:
    """Unit-modulus response exp(j 2 pi p_n . u) for one local direction."""
    if not (math.isfinite(azimuth_rad) and math.isfinite(elevation_rad)):
        raise InvalidInputError("steering angles must be finite")
    u = direction_from_angles(azimuth_rad, elevation_rad)
    return np.exp(2j * np.pi * (element_positions(spec) @ u))


def array_response(spec: ArraySpec, local_directions: np.ndarray) -> np.ndarray:
    """(N, P) matrix whose columns are steering vectors for P local unit directions."""
    directions = np.atleast_2d(np.asarray(local_directions, dtype=float))
    return np.exp(2j * np.pi * (element_positions(spec) @ directions.T))


def element_gain(angle_from_boresight, q: float):
    """
    Amplitude pattern cos(angle)^q in front of the panel, exactly zero behind it.

    Works on scalars and arrays; the result is monotone non-increasing on [0, pi].
    """
    if q < 0 or not math.isfinite(q):
        raise InvalidInputError(f"pattern exponent must be >= 0, got {q}")
    angle = np.asarray(angle_from_boresight, dtype=float)
    front = angle < HALF_PI
    cos_angle = np.cos(np.where(front, angle, 0.0))
    gain = np.where(front, np.power(np.clip(cos_angle, 0.0, 1.0), q), 0.0)
    return float(gain) if gain.ndim == 0 else gain


def pattern_gain(spec: ArraySpec, angle_from_boresight) -> np.ndarray:
    """Element gain of `spec`, honoring whether its back hemisphere is cut off."""
    angle = np.asarray(angle_from_boresight, dtype=float)
    if spec.hemisphere_cutoff:
        return np.asarray(element_gain(angle, spec.pattern_exponent), dtype=float)
    return np.power(np.abs(np.cos(angle)), spec.pattern_exponent)
