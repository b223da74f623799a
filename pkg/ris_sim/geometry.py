"""
Positions, rotation matrices and the rotated RIS frame.

Angles enter in degrees at every public interface and are converted to radians
once, here. A frame is a rotation matrix whose columns are the local x, y, z axes
expressed in global coordinates; a global direction d is seen locally as R^T d.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import DegenerateGeometryError, InvalidInputError

# Mechanical rotation order: azimuth about z first, then elevation about x,
# giving R = R_x(theta) @ R_z(phi). Not configurable.
ROTATION_ORDER = ("z", "x")

# Below this cos(elevation) a direction is treated as a pole and its azimuth set to 0.
POLE_TOLERANCE = 1e-12
ROTATION_TOLERANCE = 1e-12


def _require_finite(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite, got {value!r}")
    return value


def canonical_degrees(value: float) -> float:
    """Wrap an angle into [0, 360)."""
    wrapped = float(value) % 360.0
    # tiny negative inputs round up to exactly 360.0
    return 0.0 if wrapped >= 360.0 else wrapped


class Vec3(BaseModel):
    """A point or offset in the global scene, meters."""

    model_config = ConfigDict(frozen=True)

    x: float = Field(..., description="x coordinate (m)")
    y: float = Field(..., description="y coordinate (m)")
    z: float = Field(..., description="z coordinate (m)")

    @model_validator(mode="before")
    @classmethod
    def _from_sequence(cls, data):
        if isinstance(data, (list, tuple, np.ndarray)):
            if len(data) != 3:
                raise ValueError(f"expected 3 coordinates, got {len(data)}")
            return {"x": data[0], "y": data[1], "z": data[2]}
        return data

    @field_validator("x", "y", "z")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("coordinates must be finite")
        return value

    @classmethod
    def of(cls, x: float, y: float, z: float) -> "Vec3":
        return cls(x=x, y=y, z=z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def distance_to(self, other: "Vec3") -> float:
        return float(np.linalg.norm(other.as_array() - self.as_array()))


class RotationAngles(BaseModel):
    """Mechanical panel orientation, canonicalized into [0, 360) degrees."""

    model_config = ConfigDict(frozen=True)

    azimuth_deg: float = Field(0.0, description="rotation about the vertical z-axis (phi)")
    elevation_deg: float = Field(0.0, description="tilt about the horizontal x-axis (theta)")

    @field_validator("azimuth_deg", "elevation_deg")
    @classmethod
    def _canonical(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("rotation angles must be finite")
        return canonical_degrees(value)

    @classmethod
    def of(cls, azimuth_deg: float, elevation_deg: float = 0.0) -> "RotationAngles":
        return cls(azimuth_deg=azimuth_deg, elevation_deg=elevation_deg)

    def deviation(self) -> float:
        """Euclidean distance of (phi, theta) from (0, 0) in canonical degrees."""
        return math.hypot(self.azimuth_deg, self.elevation_deg)


@dataclass(frozen=True, eq=False)
class RotationMatrix:
    """Immutable 3x3 proper rotation."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise InvalidInputError(f"rotation matrix must be 3x3, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidInputError("rotation matrix has non-finite entries")
        if np.max(np.abs(m.T @ m - np.eye(3))) > ROTATION_TOLERANCE or abs(np.linalg.det(m) - 1.0) > ROTATION_TOLERANCE:
            raise InvalidInputError("not a proper rotation: R^T R must be I and det R must be +1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "RotationMatrix":
        return cls(np.eye(3))

    @property
    def T(self) -> "RotationMatrix":
        return RotationMatrix(self.matrix.T)

    def __matmul__(self, other):
        if isinstance(other, RotationMatrix):
            return RotationMatrix(self.matrix @ other.matrix)
        return self.matrix @ np.asarray(other, dtype=float)

    def apply(self, vector) -> np.ndarray:
        return self.matrix @ np.asarray(vector, dtype=float)

    def orthonormality_error(self) -> float:
        return float(np.max(np.abs(self.matrix.T @ self.matrix - np.eye(3))))

    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))


class NodeLayout(BaseModel):
    """Where the BS, the user and the UAV-mounted RIS sit."""

    model_config = ConfigDict(frozen=True)

    tx_pos: Vec3 = Field(..., description="base station (transmitter) position")
    rx_pos: Vec3 = Field(..., description="user (receiver) position")
    ris_pos: Vec3 = Field(..., description="RIS panel centre")
    direct_link_blocked: bool = Field(True, description="zero the BS-to-user channel D")
    ris_mount_azimuth_deg: float = Field(
        270.0,
        description="fixed yaw of the unrotated panel; 270 points its boresight along global -y",
    )

    @field_validator("ris_mount_azimuth_deg")
    @classmethod
    def _mount(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("mount azimuth must be finite")
        return canonical_degrees(value)

    @model_validator(mode="after")
    def _check(self) -> "NodeLayout":
        for name in ("tx_pos", "rx_pos", "ris_pos"):
            if getattr(self, name).z < 0:
                raise ValueError(f"{name} must not be below ground (z >= 0)")
        pairs = (("tx_pos", "rx_pos"), ("tx_pos", "ris_pos"), ("rx_pos", "ris_pos"))
        for a, b in pairs:
            if getattr(self, a).distance_to(getattr(self, b)) <= 0.0:
                raise ValueError(f"{a} and {b} coincide")
        return self


class LocalDirection(NamedTuple):
    azimuth_rad: float
    elevation_rad: float
    distance_m: float


def rot_z(phi_deg: float) -> RotationMatrix:
    """Azimuth rotation about the z-axis."""
    phi = math.radians(_require_finite(phi_deg, "azimuth"))
    c, s = math.cos(phi), math.sin(phi)
    return RotationMatrix(np.array([[c, -s, 0.0],
                                    [s, c, 0.0],
                                    [0.0, 0.0, 1.0]]))


def rot_x(theta_deg: float) -> RotationMatrix:
    """Elevation rotation about the x-axis."""
    theta = math.radians(_require_finite(theta_deg, "elevation"))
    c, s = math.cos(theta), math.sin(theta)
    return RotationMatrix(np.array([[1.0, 0.0, 0.0],
                                    [0.0, c, -s],
                                    [0.0, s, c]]))


def compose_rotation(angles: RotationAngles) -> RotationMatrix:
    """R = R_x(theta) @ R_z(phi)."""
    return rot_x(angles.elevation_deg) @ rot_z(angles.azimuth_deg)


def ris_frame(angles: RotationAngles, mount_azimuth_deg: float = 0.0) -> RotationMatrix:
    """Frame of the rotated panel: the mechanical rotation applied after the fixed mount yaw."""
    return compose_rotation(angles) @ rot_z(mount_azimuth_deg)


def to_local(directions: np.ndarray, frame: RotationMatrix) -> np.ndarray:
    """Express global unit directions (P x 3, or 3) in the frame's local axes."""
    return np.asarray(directions, dtype=float) @ frame.matrix


def local_angles(directions: np.ndarray, frame: RotationMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """Local (azimuth, elevation) in radians for global unit directions."""
    local = np.atleast_2d(to_local(directions, frame))
    uz = np.clip(local[:, 2], -1.0, 1.0)
    elevation = np.arcsin(uz)
    azimuth = np.arctan2(local[:, 1], local[:, 0])
    azimuth = np.where(np.hypot(local[:, 0], local[:, 1]) < POLE_TOLERANCE, 0.0, azimuth)
    return azimuth, elevation


def angle_from_boresight(directions: np.ndarray, frame: RotationMatrix) -> np.ndarray:
    """Angle between each global direction and the frame's local +x axis."""
    local = np.atleast_2d(to_local(directions, frame))
    return np.arccos(np.clip(local[:, 0], -1.0, 1.0))


def unit_vector(start: Vec3, end: Vec3) -> Tuple[np.ndarray, float]:
    offset = end.as_array() - start.as_array()
    distance = float(np.linalg.norm(offset))
    if distance == 0.0:
        raise DegenerateGeometryError(f"zero-length direction from {start} to {end}")
    return offset / distance, distance


def direction_from_angles(azimuth_rad, elevation_rad) -> np.ndarray:
    """Unit vectors (cos el cos az, cos el sin az, sin el); broadcasts over arrays."""
    az = np.asarray(azimuth_rad, dtype=float)
    el = np.asarray(elevation_rad, dtype=float)
    return np.stack([np.cos(el) * np.cos(az), np.cos(el) * np.sin(az), np.sin(el)], axis=-1)


def local_direction(start: Vec3, end: Vec3, frame: RotationMatrix) -> LocalDirection:
    """Direction from `start` to `end` seen in `frame`, plus the distance."""
    u, distance = unit_vector(start, end)
    azimuth, elevation = local_angles(u, frame)
    return LocalDirection(float(azimuth[0]), float(elevation[0]), distance)
