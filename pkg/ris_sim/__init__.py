"""
ris_sim: orientation-aware simulation of a UAV-mounted RIS in a mmWave MIMO link.

The central API is re-exported here so scripts can import everything from one place.
"""
from .arrays import ArrayKind, ArraySpec, array_response, element_gain, element_positions, steering_vector
from .channel import (
    ChannelRealization,
    ClusterSet,
    RealizationDraw,
    draw_realization,
    generate_clusters,
    generate_realization,
    link_geometry,
    los_probability,
    path_loss_dB,
    realization_seed,
    realize,
    scenario_notes,
    validate_scenario,
)
from .config import (
    AngleGrid,
    ClusterParams,
    Environment,
    PhaseMode,
    PhaseStrategy,
    ScenarioConfig,
    SweepSpec,
    config_digest,
)
from .errors import (
    ConfigError,
    DegenerateGeometryError,
    DimensionMismatchError,
    EmptyHeatmapError,
    InvalidInputError,
    OutputError,
    RisSimError,
    ScenarioValidationError,
    SearchSpaceTooLargeError,
)
from .geometry import (
    NodeLayout,
    RotationAngles,
    RotationMatrix,
    Vec3,
    compose_rotation,
    local_direction,
    ris_frame,
    rot_x,
    rot_z,
)
from .loader import dump_canonical_config, load_config
from .outputs import (
    TOOL_VERSION,
    RunManifest,
    emit_heatmap_csv,
    emit_heatmap_image,
    emit_summary_json,
    parse_heatmap_csv,
    write_canonical_config,
    write_manifest,
)
from .rate import RateResult, achievable_rate, determinant_rate, ergodic_rate
from .ris_control import PhaseConfig, align_phases, assemble_end_to_end, brute_force_phases, quantize_phases
from .sweep import (
    RateHeatmap,
    SweepAxis,
    find_optimal_orientation,
    run_power_sweep,
    run_rotation_family,
    run_rotation_sweep,
)

__version__ = TOOL_VERSION

__all__ = [
    "AngleGrid",
    "ArrayKind",
    "ArraySpec",
    "ChannelRealization",
    "ClusterParams",
    "ClusterSet",
    "ConfigError",
    "DegenerateGeometryError",
    "DimensionMismatchError",
    "EmptyHeatmapError",
    "Environment",
    "InvalidInputError",
    "NodeLayout",
    "OutputError",
    "PhaseConfig",
    "PhaseMode",
    "PhaseStrategy",
    "RateHeatmap",
    "RateResult",
    "RealizationDraw",
    "RisSimError",
    "RotationAngles",
    "RotationMatrix",
    "RunManifest",
    "ScenarioConfig",
    "ScenarioValidationError",
    "SearchSpaceTooLargeError",
    "SweepAxis",
    "SweepSpec",
    "TOOL_VERSION",
    "Vec3",
    "achievable_rate",
    "align_phases",
    "array_response",
    "assemble_end_to_end",
    "brute_force_phases",
    "compose_rotation",
    "config_digest",
    "determinant_rate",
    "draw_realization",
    "dump_canonical_config",
    "element_gain",
    "element_positions",
    "emit_heatmap_csv",
    "emit_heatmap_image",
    "emit_summary_json",
    "ergodic_rate",
    "find_optimal_orientation",
    "generate_clusters",
    "generate_realization",
    "link_geometry",
    "load_config",
    "local_direction",
    "los_probability",
    "parse_heatmap_csv",
    "path_loss_dB",
    "quantize_phases",
    "realization_seed",
    "realize",
    "ris_frame",
    "rot_x",
    "rot_z",
    "run_power_sweep",
    "run_rotation_family",
    "run_rotation_sweep",
    "scenario_notes",
    "steering_vector",
    "validate_scenario",
    "write_canonical_config",
    "write_manifest",
    "__version__",
]
