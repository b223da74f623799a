"""
Experiment harness: power sweeps, single-axis and joint rotation sweeps, and the
optimal-orientation search over a rate heatmap.

Every (cell, realization) pair is an independent work item. Channel draws are made
once per realization index and shared by all cells, and each item writes its
singular values into a pre-sized array by index, so the result never depends on
execution order or thread count.
"""
import asyncio
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .channel import draw_realization, require_valid
from .config import ScenarioConfig, SweepSpec, config_digest
from .errors import EmptyHeatmapError, InvalidInputError
from .geometry import RotationAngles
from .rate import RateResult, rate_from_singular_values, realization_singular_values, snr_linear, summarize_rates
from .settings import load_settings

logger = logging.getLogger(__name__)

ROTATION_KIND = "rotation"
POWER_KIND = "power"


class SweepAxis(str, Enum):
    AZIMUTH = "az"
    ELEVATION = "el"
    JOINT = "joint"

    @classmethod
    def parse(cls, value) -> "SweepAxis":
        if isinstance(value, SweepAxis):
            return value
        aliases = {"azimuth": cls.AZIMUTH, "elevation": cls.ELEVATION}
        text = str(value).strip().lower()
        if text in aliases:
            return aliases[text]
        try:
            return cls(text)
        except ValueError:
            raise InvalidInputError(f"unknown sweep axis {value!r}; expected az, el or joint") from None


@dataclass(frozen=True, eq=False)
class RateHeatmap:
    """
    Grid of ergodic rates. Rows follow axis2, columns follow axis1.

    Rotation heatmaps use axis1 = phi_deg and axis2 = theta_deg; power heatmaps use
    axis1 = pt_dBm and a single axis2 row holding the RIS element count.
    """

    kind: str
    axis1_name: str
    axis1_values: np.ndarray
    axis2_name: str
    axis2_values: np.ndarray
    mean: np.ndarray
    std_error: np.ndarray
    realizations: int
    metadata: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("axis1_values", "axis2_values", "mean", "std_error"):
            value = np.array(getattr(self, name), dtype=float)
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        expected = (self.axis2_values.shape[0], self.axis1_values.shape[0])
        if self.mean.shape != expected or self.std_error.shape != expected:
            raise InvalidInputError(
                f"heatmap grid {self.mean.shape} does not match axes {expected} (rows x columns)"
            )
        if np.any(np.isnan(self.mean)):
            raise InvalidInputError("heatmap has missing cells")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.mean.shape

    @property
    def is_empty(self) -> bool:
        return self.mean.size == 0

    def cell(self, row: int, column: int) -> RateResult:
        return RateResult(
            mean_rate=float(self.mean[row, column]),
            std_error=float(self.std_error[row, column]),
            realizations_used=self.realizations,
        )

    def zero_fraction(self) -> float:
        return float(np.mean(self.mean == 0.0)) if self.mean.size else 0.0


def _heatmap_metadata(config: ScenarioConfig, spec: Optional[SweepSpec] = None) -> Dict[str, object]:
    return {
        "config_digest": config_digest(spec if spec is not None else config),
        "seed": config.master_seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _effective_scenario(spec: SweepSpec) -> ScenarioConfig:
    if spec.phase_mode is None or spec.phase_mode == spec.scenario.phase_mode:
        return spec.scenario
    return spec.scenario.model_copy(update={"phase_mode": spec.phase_mode})


async def _singular_value_grid(
    config: ScenarioConfig,
    spec: SweepSpec,
    rotations: Sequence[RotationAngles],
    threads: int,
) -> np.ndarray:
    """(cells, M, min(Nr, Nt)) singular values of C for every rotation and realization."""
    m = config.realizations
    k = min(config.nr, config.nt)
    grid = np.empty((len(rotations), m, k))
    loop = asyncio.get_running_loop()

    with ThreadPoolExecutor(max_workers=threads) as pool:
        draws = await asyncio.gather(
            *(loop.run_in_executor(pool, draw_realization, config, index) for index in range(m))
        )

        async def work_item(cell: int, index: int) -> None:
            grid[cell, index] = await loop.run_in_executor(
                pool, realization_singular_values, draws[index], config, rotations[cell], spec.strategy
            )

        await asyncio.gather(*(work_item(cell, index) for cell in range(len(rotations)) for index in range(m)))
    return grid


def _compute_grid(
    config: ScenarioConfig,
    spec: SweepSpec,
    rotations: Sequence[RotationAngles],
    threads: Optional[int],
    allow_invalid: bool,
) -> np.ndarray:
    require_valid(config, allow_invalid)
    workers = load_settings(threads).threads
    logger.info(
        "Sweeping %d cell(s) x %d realization(s) on %d thread(s)", len(rotations), config.realizations, workers
    )
    grid = asyncio.run(_singular_value_grid(config, spec, rotations, workers))
    logger.debug("Singular-value grid complete: %s", grid.shape)
    return grid


def _summarize_cells(grid: np.ndarray, rho: float) -> List[RateResult]:
    results = []
    for cell in range(grid.shape[0]):
        rates = np.empty(grid.shape[1])
        for index in range(grid.shape[1]):
            rates[index] = rate_from_singular_values(grid[cell, index], rho)
        results.append(summarize_rates(rates))
    return results


def _rotation_axes(spec: SweepSpec, axis: SweepAxis) -> Tuple[np.ndarray, np.ndarray]:
    if axis == SweepAxis.AZIMUTH:
        return spec.azimuth.values(), np.array([spec.hold_elevation_deg])
    if axis == SweepAxis.ELEVATION:
        return np.array([spec.hold_azimuth_deg]), spec.elevation.values()
    return spec.azimuth.values(), spec.elevation.values()


def _rotation_heatmap(
    spec: SweepSpec,
    config: ScenarioConfig,
    phis: np.ndarray,
    thetas: np.ndarray,
    results: List[RateResult],
) -> RateHeatmap:
    mean = np.array([r.mean_rate for r in results]).reshape(thetas.shape[0], phis.shape[0])
    std_error = np.array([r.std_error for r in results]).reshape(thetas.shape[0], phis.shape[0])
    return RateHeatmap(
        kind=ROTATION_KIND,
        axis1_name="phi_deg",
        axis1_values=phis,
        axis2_name="theta_deg",
        axis2_values=thetas,
        mean=mean,
        std_error=std_error,
        realizations=config.realizations,
        metadata=_heatmap_metadata(config, spec),
    )


def run_rotation_family(
    spec: SweepSpec,
    axis="joint",
    powers_dBm: Optional[Sequence[float]] = None,
    threads: Optional[int] = None,
    allow_invalid: bool = False,
) -> Dict[float, RateHeatmap]:
    """One rotation heatmap per transmit power, all from a single channel pass."""
    axis = SweepAxis.parse(axis)
    config = _effective_scenario(spec)
    powers = list(spec.powers_dBm if powers_dBm is None else powers_dBm)
    if not powers:
        raise InvalidInputError("rotation family needs at least one transmit power")

    phis, thetas = _rotation_axes(spec, axis)
    # row-major over (theta, phi) so results reshape straight into the grid
    rotations = [RotationAngles.of(phi, theta) for theta in thetas for phi in phis]
    grid = _compute_grid(config, spec, rotations, threads, allow_invalid)

    family = {}
    for power in powers:
        results = _summarize_cells(grid, snr_linear(power, config.noise_dBm))
        family[float(power)] = _rotation_heatmap(spec, config, phis, thetas, results)
    logger.info("Rotation sweep (%s) finished: %d x %d cells", axis.value, thetas.shape[0], phis.shape[0])
    return family


def run_rotation_sweep(
    spec: SweepSpec, axis="joint", threads: Optional[int] = None, allow_invalid: bool = False
) -> RateHeatmap:
    """Ergodic rate over the azimuth grid, the elevation grid, or both, at the scenario's pt_dBm."""
    power = float(spec.scenario.pt_dBm)
    return run_rotation_family(spec, axis, [power], threads, allow_invalid)[power]


def run_power_sweep(spec: SweepSpec, threads: Optional[int] = None, allow_invalid: bool = False) -> RateHeatmap:
    """Rate versus transmit power at rotation (0, 0); draws are shared across powers."""
    config = _effective_scenario(spec)
    grid = _compute_grid(config, spec, [RotationAngles()], threads, allow_invalid)
    results = [_summarize_cells(grid, snr_linear(power, config.noise_dBm))[0] for power in spec.powers_dBm]
    logger.info("Power sweep finished: %d power level(s), N = %d", len(results), config.n_ris)
    return RateHeatmap(
        kind=POWER_KIND,
        axis1_name="pt_dBm",
        axis1_values=np.asarray(spec.powers_dBm, dtype=float),
        axis2_name="ris_elements",
        axis2_values=np.array([config.n_ris], dtype=float),
        mean=np.array([[r.mean_rate for r in results]]),
        std_error=np.array([[r.std_error for r in results]]),
        realizations=config.realizations,
        metadata=_heatmap_metadata(config, spec),
    )


def find_optimal_orientation(heatmap: RateHeatmap) -> Tuple[RotationAngles, RateResult]:
    """
    Argmax of the mean rate. Ties go to the smallest deviation hypot(phi, theta)
    from (0, 0) in canonical degrees, then to the smallest phi.
    """
    if heatmap.is_empty:
        raise EmptyHeatmapError("cannot search an empty heatmap")
    if heatmap.kind != ROTATION_KIND:
        raise InvalidInputError(f"orientation search needs a rotation heatmap, got a {heatmap.kind} heatmap")

    best_key, best_cell = None, None
    for row, theta in enumerate(heatmap.axis2_values):
        for column, phi in enumerate(heatmap.axis1_values):
            angles = RotationAngles.of(float(phi), float(theta))
            key = (-heatmap.mean[row, column], angles.deviation(), angles.azimuth_deg)
            if best_key is None or key < best_key:
                best_key, best_cell = key, (angles, row, column)

    angles, row, column = best_cell
    result = heatmap.cell(row, column)
    if not math.isfinite(result.mean_rate):
        raise InvalidInputError("heatmap maximum is not finite")
    logger.debug("Optimal orientation %s with rate %.6f", angles, result.mean_rate)
    return angles, result
