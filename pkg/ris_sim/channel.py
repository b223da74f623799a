"""
Stochastic synthesis of the three links feeding C = G Phi H + D.

H is BS -> RIS (N x Nt), G is RIS -> user (Nr x N), D is BS -> user (Nr x Nt).
Random draws (LOS state, shadowing, clusters) depend only on the master seed and
the realization index, never on the RIS rotation: `draw_realization` produces them
once and `realize` turns them into matrices for any orientation.
"""
import hashlib
import logging
import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional

import numpy as np
from scipy.constants import speed_of_light

from .arrays import ArrayKind, ArraySpec, array_response, pattern_gain
from .config import (
    SUPPORTED_FREQUENCIES_GHZ,
    ClusterParams,
    Environment,
    LosModel,
    PathLossTable,
    ScenarioConfig,
)
from .errors import DimensionMismatchError, InvalidInputError, ScenarioValidationError
from .geometry import (
    RotationAngles,
    RotationMatrix,
    Vec3,
    angle_from_boresight,
    direction_from_angles,
    ris_frame,
    to_local,
    unit_vector,
)

logger = logging.getLogger(__name__)

INDOOR_MAX_TX_HEIGHT_M = 3.0
INDOOR_MAX_RX_HEIGHT_M = 2.0
INDOOR_MAX_RIS_RX_DISTANCE_M = 10.0
OUTDOOR_MAX_TX_HEIGHT_M = 20.0

# Per-link stream ids for numpy.random.default_rng([realization_seed, link_id]).
LINK_H, LINK_G, LINK_D, PHASE_STREAM = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# Scenario rules
# ---------------------------------------------------------------------------

def validate_scenario(config: ScenarioConfig) -> List[str]:
    """
    Check deployment rules. Returns every violation found; an empty list means ok.

    Indoor: tx height <= 3 m, rx height < 2 m, RIS-rx distance <= 10 m.
    Outdoor: tx height <= 20 m. Both: 28 or 73 GHz and a planar (UPA) RIS.
    """
    violations: List[str] = []
    layout = config.layout
    tx_z, rx_z = layout.tx_pos.z, layout.rx_pos.z
    ris_rx = layout.ris_pos.distance_to(layout.rx_pos)

    if config.environment == Environment.INDOOR:
        if tx_z > INDOOR_MAX_TX_HEIGHT_M:
            violations.append(f"tx height > 3 m (indoor transmitter height limit): z = {tx_z:g} m")
        if not rx_z < INDOOR_MAX_RX_HEIGHT_M:
            violations.append(f"rx height >= 2 m (indoor receiver must be below 2 m): z = {rx_z:g} m")
        if ris_rx > INDOOR_MAX_RIS_RX_DISTANCE_M:
            violations.append(f"RIS-rx distance > 10 m (indoor limit): {ris_rx:.3f} m")
    else:
        if tx_z > OUTDOOR_MAX_TX_HEIGHT_M:
            violations.append(f"tx height > 20 m (outdoor transmitter height limit): z = {tx_z:g} m")

    if config.frequency_GHz not in SUPPORTED_FREQUENCIES_GHZ:
        violations.append(f"frequency {config.frequency_GHz:g} GHz not in {{28, 73}} GHz")
    if config.ris_array.kind != ArrayKind.UPA:
        violations.append(f"RIS array must be a UPA, got {config.ris_array.kind.value}")
    return violations


def require_valid(config: ScenarioConfig, allow_invalid: bool = False) -> None:
    violations = validate_scenario(config)
    if violations and not allow_invalid:
        raise ScenarioValidationError(violations)
    for violation in violations:
        logger.warning("Running despite scenario violation: %s", violation)


def wavelength_m(frequency_GHz: float) -> float:
    return speed_of_light / (frequency_GHz * 1e9)


def aperture_m(spec: ArraySpec, frequency_GHz: float) -> float:
    """Largest dimension (diagonal) of an array, meters."""
    span = spec.spacing_wavelengths * math.hypot(spec.nx - 1, spec.ny - 1)
    return span * wavelength_m(frequency_GHz)


def scenario_notes(config: ScenarioConfig) -> List[str]:
    """Non-fatal remarks, e.g. nodes closer to the RIS than its far-field distance."""
    notes = []
    lam = wavelength_m(config.frequency_GHz)
    fraunhofer = 2.0 * aperture_m(config.ris_array, config.frequency_GHz) ** 2 / lam
    layout = config.layout
    for name, node in (("tx", layout.tx_pos), ("rx", layout.rx_pos)):
        distance = layout.ris_pos.distance_to(node)
        if distance < fraunhofer:
            notes.append(
                f"{name} is {distance:.2f} m from the RIS, inside its far-field distance "
                f"{fraunhofer:.2f} m; the plane-wave model is approximate there"
            )
    return notes


# ---------------------------------------------------------------------------
# Large-scale model
# ---------------------------------------------------------------------------

def _require_positive_distance(distance_m: float) -> float:
    distance_m = float(distance_m)
    if not math.isfinite(distance_m) or distance_m <= 0.0:
        raise InvalidInputError(f"distance must be positive and finite, got {distance_m!r}")
    return distance_m


def los_probability(
    distance_m: float,
    environment: Environment,
    tx_height_m: float = 0.0,
    model: Optional[LosModel] = None,
) -> float:
    """
    p = min(d1/d, 1) (1 - exp(-d/d2)) + exp(-d/d2).

    tx_height_m is accepted for interface symmetry; this functional form ignores it.
    """
    distance_m = _require_positive_distance(distance_m)
    params = (model or LosModel()).lookup(environment)
    decay = math.exp(-distance_m / params.d2_m)
    p = min(params.d1_m / distance_m, 1.0) * (1.0 - decay) + decay
    return min(max(p, 0.0), 1.0)


def path_loss_dB(
    distance_m: float,
    frequency_GHz: float,
    environment: Environment,
    is_los: bool,
    rng: Optional[np.random.Generator] = None,
    table: Optional[PathLossTable] = None,
    sigma_override_dB: Optional[float] = None,
) -> float:
    """
    PL = A + 10 n log10(d) + 20 log10(f_GHz) + X_sigma.

    One standard normal is always drawn from `rng` (when given) so the stream
    position does not depend on sigma.
    """
    distance_m = _require_positive_distance(distance_m)
    coeffs = (table or PathLossTable()).lookup(environment, is_los)
    sigma = coeffs.shadowing_sigma_db if sigma_override_dB is None else sigma_override_dB
    loss = coeffs.intercept_db + 10.0 * coeffs.exponent * math.log10(distance_m) + 20.0 * math.log10(frequency_GHz)
    if rng is not None:
        loss += sigma * float(rng.standard_normal())
    return loss


# ---------------------------------------------------------------------------
# Small-scale model
# ---------------------------------------------------------------------------

class LinkGeometry(NamedTuple):
    """Global unit directions of the geometric path at each end of a link."""

    departure: np.ndarray  # at the transmitting node, towards the receiver
    arrival: np.ndarray  # at the receiving node, towards the transmitter
    distance_m: float
    los_probability: float


@dataclass(frozen=True, eq=False)
class ClusterSet:
    """Paths of one link: global departure/arrival unit vectors and complex gains."""

    departure_dirs: np.ndarray
    arrival_dirs: np.ndarray
    gains: np.ndarray
    cluster_count: int
    has_los: bool

    def __post_init__(self):
        for name in ("departure_dirs", "arrival_dirs", "gains"):
            value = np.array(getattr(self, name))
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def num_paths(self) -> int:
        return int(self.gains.shape[0])

    def total_power(self) -> float:
        return float(np.sum(np.abs(self.gains) ** 2))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClusterSet):
            return NotImplemented
        return (
            self.cluster_count == other.cluster_count
            and self.has_los == other.has_los
            and np.array_equal(self.departure_dirs, other.departure_dirs)
            and np.array_equal(self.arrival_dirs, other.arrival_dirs)
            and np.array_equal(self.gains, other.gains)
        )


def link_geometry(start: Vec3, end: Vec3, environment: Environment, los_model: Optional[LosModel] = None) -> LinkGeometry:
    u, distance = unit_vector(start, end)
    p_los = los_probability(distance, environment, start.z, los_model)
    return LinkGeometry(departure=u, arrival=-u, distance_m=distance, los_probability=p_los)


def _angles_of(direction: np.ndarray):
    return math.atan2(direction[1], direction[0]), math.asin(max(-1.0, min(1.0, direction[2])))


def _offset_directions(center_az, center_el, d_az, d_el) -> np.ndarray:
    elevation = np.clip(center_el + d_el, -math.pi / 2.0, math.pi / 2.0)
    return direction_from_angles(center_az + d_az, elevation)


def generate_clusters(rng: np.random.Generator, geometry: LinkGeometry, params: ClusterParams) -> ClusterSet:
    """
    Draw clustered multipath for one link.

    Cluster count is max(1, Poisson(lambda_c)). Each cluster centre sits within
    +/- center_spread (azimuth) and +/- center_spread/3 (elevation) of the geometric
    direction at each end; its S subrays scatter with Laplacian offsets whose
    standard deviation is angular_spread. Scattered gains are CN(0, 1/P) so their
    mean total power is 1. A LOS path along the geometric direction is present with
    probability los_probability and then takes K/(K+1) of the power.
    """
    los_draw = float(rng.random())
    has_los = params.los_enabled and los_draw < geometry.los_probability
    n_clusters = max(1, int(rng.poisson(params.mean_cluster_count)))
    subrays = params.subrays_per_cluster

    spread = math.radians(params.center_spread_deg)
    laplace_scale = math.radians(params.angular_spread_deg) / math.sqrt(2.0)

    dep_az, dep_el = _angles_of(geometry.departure)
    arr_az, arr_el = _angles_of(geometry.arrival)

    centres = rng.uniform(-1.0, 1.0, size=(n_clusters, 4)) * np.array([spread, spread / 3.0, spread, spread / 3.0])
    offsets = rng.laplace(0.0, laplace_scale, size=(n_clusters, subrays, 4))
    angles = (centres[:, None, :] + offsets).reshape(-1, 4)

    departure = _offset_directions(dep_az, dep_el, angles[:, 0], angles[:, 1])
    arrival = _offset_directions(arr_az, arr_el, angles[:, 2], angles[:, 3])

    num_scattered = n_clusters * subrays
    gains = (rng.standard_normal(num_scattered) + 1j * rng.standard_normal(num_scattered)) / math.sqrt(2.0 * num_scattered)

    if has_los:
        k = 10.0 ** (params.ricean_k_db / 10.0)
        los_phase = rng.uniform(0.0, 2.0 * math.pi)
        gains = gains * math.sqrt(1.0 / (k + 1.0))
        gains = np.concatenate([[math.sqrt(k / (k + 1.0)) * np.exp(1j * los_phase)], gains])
        departure = np.vstack([geometry.departure, departure])
        arrival = np.vstack([geometry.arrival, arrival])

    return ClusterSet(departure, arrival, gains, n_clusters, has_los)


def assemble_link(
    clusters: ClusterSet,
    tx_spec: ArraySpec,
    rx_spec: ArraySpec,
    tx_frame: RotationMatrix,
    rx_frame: RotationMatrix,
    path_loss_db: float,
) -> np.ndarray:
    """
    10^(-PL/20) * sum_p gain_p g_rx,p g_tx,p a_rx(p) a_tx(p)^H  (N_rx x N_tx).

    Directions are mapped into each node's frame before evaluating responses and
    element gains.
    """
    p = clusters.num_paths
    if clusters.departure_dirs.shape != (p, 3) or clusters.arrival_dirs.shape != (p, 3):
        raise DimensionMismatchError(
            f"cluster arrays disagree: {clusters.departure_dirs.shape}, "
            f"{clusters.arrival_dirs.shape}, {clusters.gains.shape}"
        )
    dep_local = to_local(clusters.departure_dirs, tx_frame)
    arr_local = to_local(clusters.arrival_dirs, rx_frame)

    g_tx = pattern_gain(tx_spec, angle_from_boresight(clusters.departure_dirs, tx_frame))
    g_rx = pattern_gain(rx_spec, angle_from_boresight(clusters.arrival_dirs, rx_frame))
    weights = clusters.gains * g_tx * g_rx * 10.0 ** (-path_loss_db / 20.0)

    a_tx = array_response(tx_spec, dep_local)
    a_rx = array_response(rx_spec, arr_local)
    return (a_rx * weights) @ a_tx.conj().T


# ---------------------------------------------------------------------------
# Realizations
# ---------------------------------------------------------------------------

def realization_seed(master_seed: int, realization_index: int) -> int:
    """hash64: blake2b (8-byte digest) of the two little-endian uint64 values."""
    payload = int(master_seed).to_bytes(8, "little") + int(realization_index).to_bytes(8, "little")
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def link_rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream])


@dataclass(frozen=True)
class LinkDraw:
    clusters: ClusterSet
    path_loss_db: float
    geometry: LinkGeometry = field(compare=False)


@dataclass(frozen=True)
class RealizationDraw:
    """Everything random about one realization; independent of RIS orientation."""

    index: int
    seed: int
    h: LinkDraw
    g: LinkDraw
    d: LinkDraw


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    H: np.ndarray
    G: np.ndarray
    D: np.ndarray
    seed_used: int
    index: int = 0


def _draw_link(seed: int, stream: int, start: Vec3, end: Vec3, config: ScenarioConfig) -> LinkDraw:
    rng = link_rng(seed, stream)
    geometry = link_geometry(start, end, config.environment, config.los_model)
    clusters = generate_clusters(rng, geometry, config.cluster_params)
    loss = path_loss_dB(
        geometry.distance_m,
        config.frequency_GHz,
        config.environment,
        clusters.has_los,
        rng,
        config.path_loss,
        config.cluster_params.shadow_fading_sigma_dB,
    )
    return LinkDraw(clusters=clusters, path_loss_db=loss, geometry=geometry)


def draw_realization(config: ScenarioConfig, realization_index: int) -> RealizationDraw:
    """Random part of one realization. D is drawn even when blocked to keep streams aligned."""
    seed = realization_seed(config.master_seed, realization_index)
    layout = config.layout
    return RealizationDraw(
        index=realization_index,
        seed=seed,
        h=_draw_link(seed, LINK_H, layout.tx_pos, layout.ris_pos, config),
        g=_draw_link(seed, LINK_G, layout.ris_pos, layout.rx_pos, config),
        d=_draw_link(seed, LINK_D, layout.tx_pos, layout.rx_pos, config),
    )


def realize(draw: RealizationDraw, config: ScenarioConfig, rotation: RotationAngles) -> ChannelRealization:
    """Matrices of a drawn realization for one RIS orientation."""
    frame = ris_frame(rotation, config.layout.ris_mount_azimuth_deg)
    fixed = RotationMatrix.identity()
    H = assemble_link(draw.h.clusters, config.bs_array, config.ris_array, fixed, frame, draw.h.path_loss_db)
    G = assemble_link(draw.g.clusters, config.ris_array, config.user_array, frame, fixed, draw.g.path_loss_db)
    if config.layout.direct_link_blocked:
        D = np.zeros((config.nr, config.nt), dtype=complex)
    else:
        D = assemble_link(draw.d.clusters, config.bs_array, config.user_array, fixed, fixed, draw.d.path_loss_db)
    return ChannelRealization(H=H, G=G, D=D, seed_used=draw.seed, index=draw.index)


def generate_realization(config: ScenarioConfig, rotation: RotationAngles, realization_index: int) -> ChannelRealization:
    """One validated realization of (H, G, D) for the given orientation."""
    require_valid(config)
    return realize(draw_realization(config, realization_index), config, rotation)
