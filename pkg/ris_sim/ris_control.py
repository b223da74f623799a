"""
RIS phase configuration and the end-to-end channel C = G diag(e^{j phi}) H + D.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .config import PhaseStrategy
from .errors import DimensionMismatchError, InvalidInputError, SearchSpaceTooLargeError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
MAX_SEARCH_BITS = 20
SEARCH_BATCH = 4096


def canonical_phases(phases) -> np.ndarray:
    """Wrap phases into [0, 2 pi)."""
    wrapped = np.mod(np.asarray(phases, dtype=float), TWO_PI)
    return np.where(wrapped >= TWO_PI, 0.0, wrapped)


@dataclass(frozen=True, eq=False)
class PhaseConfig:
    """The N reflection phases of the panel; `degenerate` flags a fallback to all zeros."""

    phases: np.ndarray
    strategy: str = PhaseStrategy.ZERO.value
    degenerate: bool = False

    def __post_init__(self):
        phases = canonical_phases(self.phases).ravel()
        phases.setflags(write=False)
        object.__setattr__(self, "phases", phases)

    @classmethod
    def zeros(cls, n: int, degenerate: bool = False) -> "PhaseConfig":
        return cls(np.zeros(n), PhaseStrategy.ZERO.value, degenerate)

    @property
    def size(self) -> int:
        return int(self.phases.shape[0])

    def coefficients(self) -> np.ndarray:
        """Diagonal entries e^{j phi_n} of Phi."""
        return np.exp(1j * self.phases)


PhaseLike = Union[PhaseConfig, np.ndarray]


def _phase_array(phases: PhaseLike) -> np.ndarray:
    if isinstance(phases, PhaseConfig):
        return phases.phases
    return np.asarray(phases, dtype=float).ravel()


def _check_shapes(H: np.ndarray, G: np.ndarray, D: Optional[np.ndarray] = None) -> None:
    if H.ndim != 2 or G.ndim != 2:
        raise DimensionMismatchError(f"H and G must be matrices, got {H.shape} and {G.shape}")
    if G.shape[1] != H.shape[0]:
        raise DimensionMismatchError(f"G is {G.shape} but H is {H.shape}; inner RIS dimension differs")
    if D is not None and D.shape != (G.shape[0], H.shape[1]):
        raise DimensionMismatchError(f"D must be {(G.shape[0], H.shape[1])}, got {D.shape}")


def assemble_end_to_end(H: np.ndarray, G: np.ndarray, D: Optional[np.ndarray], phases: PhaseLike) -> np.ndarray:
    """C = G diag(e^{j phi}) H + D."""
    H, G = np.asarray(H), np.asarray(G)
    D = np.zeros((G.shape[0], H.shape[1]), dtype=complex) if D is None else np.asarray(D)
    _check_shapes(H, G, D)
    phi = _phase_array(phases)
    if phi.shape[0] != H.shape[0]:
        raise DimensionMismatchError(f"{phi.shape[0]} phases for a {H.shape[0]}-element RIS")
    return (G * np.exp(1j * phi)) @ H + D


def align_phases(
    H: np.ndarray,
    G: np.ndarray,
    strategy: PhaseStrategy = PhaseStrategy.DOMINANT_PAIR,
    rng: Optional[np.random.Generator] = None,
) -> PhaseConfig:
    """
    Choose Phi for a realization.

    dominant_pair: with u the dominant left singular vector of G and v the dominant
    right singular vector of H, set phi_n = arg((G^H u)_n) - arg((H v)_n) so that
    every term of u^H G Phi H v adds in phase.
    """
    H, G = np.asarray(H), np.asarray(G)
    _check_shapes(H, G)
    n = H.shape[0]
    strategy = PhaseStrategy(strategy)

    if strategy == PhaseStrategy.ZERO:
        return PhaseConfig.zeros(n)
    if strategy == PhaseStrategy.RANDOM:
        rng = rng if rng is not None else np.random.default_rng(0)
        return PhaseConfig(rng.uniform(0.0, TWO_PI, size=n), strategy.value)

    if not np.any(H) or not np.any(G):
        # routine for back-facing orientations in a sweep
        logger.debug("Zero channel matrix; dominant-pair alignment falls back to zero phases")
        return PhaseConfig.zeros(n, degenerate=True)

    u = np.linalg.svd(G, full_matrices=False)[0][:, 0]
    v = np.linalg.svd(H, full_matrices=False)[2][0, :].conj()
    g_tilde = G.conj().T @ u
    h_tilde = H @ v
    return PhaseConfig(np.angle(g_tilde) - np.angle(h_tilde), strategy.value)


def grid_phases(indices, bits: int) -> np.ndarray:
    """Phases 2 pi k / 2^b for integer grid indices k."""
    return TWO_PI * np.asarray(indices, dtype=float) / float(2**bits)


def quantize_phases(phases: PhaseLike, bits: int) -> PhaseConfig:
    """Snap each phase to the nearest point of the 2^b grid."""
    if bits < 1:
        raise InvalidInputError("phase quantization needs at least 1 bit")
    levels = 2**bits
    k = np.mod(np.rint(_phase_array(phases) / (TWO_PI / levels)), levels).astype(np.int64)
    return PhaseConfig(grid_phases(k, bits), "quantized")


def _grid_indices(flat: np.ndarray, n: int, levels: int) -> np.ndarray:
    """Lexicographic digits (first element most significant) of flat grid indices."""
    powers = levels ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (flat[:, None] // powers[None, :]) % levels


def _check_search(n: int, bits: int) -> None:
    if bits < 1:
        raise InvalidInputError("brute-force search needs at least 1 bit per element")
    if n * bits > MAX_SEARCH_BITS:
        raise SearchSpaceTooLargeError(
            f"2^({n}*{bits}) configurations exceed the 2^{MAX_SEARCH_BITS} search cap"
        )


def enumerate_phase_rates(H, G, D, bits: int, pt_dBm: float, noise_dBm: float) -> np.ndarray:
    """Rate of every quantized phase tuple, in lexicographic order of the tuples."""
    from .rate import rate_from_singular_values, snr_linear

    H, G = np.asarray(H), np.asarray(G)
    D = np.zeros((G.shape[0], H.shape[1]), dtype=complex) if D is None else np.asarray(D)
    _check_shapes(H, G, D)
    n = H.shape[0]
    _check_search(n, bits)

    levels = 2**bits
    total = levels**n
    rho = snr_linear(pt_dBm, noise_dBm)
    rates = np.empty(total)
    for start in range(0, total, SEARCH_BATCH):
        flat = np.arange(start, min(start + SEARCH_BATCH, total), dtype=np.int64)
        coeffs = np.exp(1j * grid_phases(_grid_indices(flat, n, levels), bits))
        C = np.einsum("rn,bn,nt->brt", G, coeffs, H) + D
        s = np.linalg.svd(C, compute_uv=False)
        rates[start:start + flat.shape[0]] = rate_from_singular_values(s, rho)
    return rates


def brute_force_phases(H, G, D, bits: int, pt_dBm: float, noise_dBm: float) -> PhaseConfig:
    """
    Exhaustive search over the 2^b phase grid per element (test oracle).

    Ties go to the lexicographically smallest phase tuple.
    """
    rates = enumerate_phase_rates(H, G, D, bits, pt_dBm, noise_dBm)
    best = int(np.argmax(rates))
    n = np.asarray(H).shape[0]
    indices = _grid_indices(np.array([best], dtype=np.int64), n, 2**bits)[0]
    logger.debug("brute force: %d configurations, best rate %.6f", rates.shape[0], rates[best])
    return PhaseConfig(grid_phases(indices, bits), "brute_force")
