"""
Achievable rate R = log2 det(I + (Pt/sigma^2) C C^H) and its ergodic average.

The rate is evaluated from singular values, sum_i log2(1 + rho s_i^2), which stays
accurate at high SNR; the determinant form is kept as `determinant_rate` for checks.
"""
import logging
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .channel import PHASE_STREAM, RealizationDraw, draw_realization, link_rng, realize, require_valid
from .config import PhaseMode, PhaseStrategy, ScenarioConfig
from .errors import InvalidInputError
from .geometry import RotationAngles
from .ris_control import align_phases, assemble_end_to_end

logger = logging.getLogger(__name__)

LOG2 = math.log(2.0)
UNROTATED = RotationAngles()


@dataclass(frozen=True)
class RateResult:
    mean_rate: float
    std_error: float
    realizations_used: int

    def __post_init__(self):
        if self.mean_rate < 0 or self.std_error < 0:
            raise InvalidInputError(f"rates must be non-negative: {self}")


def snr_linear(pt_dBm: float, noise_dBm: float) -> float:
    """rho = Pt / sigma^2 from dBm values."""
    return 10.0 ** ((pt_dBm - noise_dBm) / 10.0)


def rate_from_singular_values(singular_values, rho: float):
    """sum_i log2(1 + rho s_i^2) over the last axis."""
    s = np.asarray(singular_values, dtype=float)
    return np.sum(np.log1p(rho * s**2), axis=-1) / LOG2


def _finite_matrix(C) -> np.ndarray:
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    if not np.all(np.isfinite(C)):
        raise InvalidInputError("channel matrix has non-finite entries")
    return C


def achievable_rate(C, pt_dBm: float, noise_dBm: float) -> float:
    """Rate in bits/sec/Hz of the end-to-end channel C at transmit power Pt."""
    C = _finite_matrix(C)
    if not (math.isfinite(pt_dBm) and math.isfinite(noise_dBm)):
        raise InvalidInputError("power levels must be finite")
    s = np.linalg.svd(C, compute_uv=False)
    return float(rate_from_singular_values(s, snr_linear(pt_dBm, noise_dBm)))


def determinant_rate(C, pt_dBm: float, noise_dBm: float) -> float:
    """Same quantity through log det(I + rho C C^H)."""
    C = _finite_matrix(C)
    rho = snr_linear(pt_dBm, noise_dBm)
    _, logdet = np.linalg.slogdet(np.eye(C.shape[0]) + rho * C @ C.conj().T)
    return float(logdet / LOG2)


def summarize_rates(rates: Iterable[float]) -> RateResult:
    """Mean and standard error; numpy's pairwise summation keeps the mean order-insensitive."""
    values = np.asarray(list(rates), dtype=float)
    count = int(values.shape[0])
    if count == 0:
        raise InvalidInputError("no rates to summarize")
    mean = float(np.mean(values))
    std_error = float(np.std(values, ddof=1) / math.sqrt(count)) if count > 1 else 0.0
    return RateResult(mean_rate=max(mean, 0.0), std_error=std_error, realizations_used=count)


def realization_singular_values(
    draw: RealizationDraw,
    config: ScenarioConfig,
    rotation: RotationAngles,
    strategy: PhaseStrategy = PhaseStrategy.DOMINANT_PAIR,
) -> np.ndarray:
    """Singular values of C for one drawn realization with phases chosen per strategy."""
    channel = realize(draw, config, rotation)
    source = channel
    if config.phase_mode == PhaseMode.FROZEN and rotation != UNROTATED:
        source = realize(draw, config, UNROTATED)
    phases = align_phases(source.H, source.G, strategy, rng=link_rng(draw.seed, PHASE_STREAM))
    C = assemble_end_to_end(channel.H, channel.G, channel.D, phases)
    return np.linalg.svd(C, compute_uv=False)


def ergodic_rate(
    config: ScenarioConfig,
    rotation: RotationAngles = UNROTATED,
    strategy: PhaseStrategy = PhaseStrategy.DOMINANT_PAIR,
    allow_invalid: bool = False,
) -> RateResult:
    """Average rate over the config's M realizations at its transmit power."""
    require_valid(config, allow_invalid)
    rho = snr_linear(config.pt_dBm, config.noise_dBm)
    rates = np.empty(config.realizations)
    for index in range(config.realizations):
        s = realization_singular_values(draw_realization(config, index), config, rotation, strategy)
        rates[index] = rate_from_singular_values(s, rho)
    result = summarize_rates(rates)
    logger.debug("ergodic rate at %s: %.6f +/- %.6f", rotation, result.mean_rate, result.std_error)
    return result
