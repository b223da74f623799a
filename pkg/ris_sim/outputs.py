"""
Result persistence: heatmap CSV and JSON, SVG heatmap images, the JSON run summary
and the run manifest.

Everything except the manifest is a pure function of the heatmap, so equal seeds
give byte-identical files. The manifest is the only file that records wall-clock
timestamps.
"""
import csv
import json
import logging
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .config import SweepSpec
from .errors import InvalidInputError, OutputError
from .geometry import RotationAngles
from .loader import dump_canonical_config
from .rate import RateResult
from .sweep import POWER_KIND, ROTATION_KIND, RateHeatmap, find_optimal_orientation

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

DISTRIBUTION_NAME = "ris-orientation-sim"
CELL_FORMAT = ".9g"
HEATMAP_COLORMAP = "viridis"
ARGMAX_GID = "argmax-cell"
MANIFEST_NAME = "manifest.json"
CONFIG_NAME = "config.json"

try:
    TOOL_VERSION = version(DISTRIBUTION_NAME)
except PackageNotFoundError:
    TOOL_VERSION = "0.1.0"


def _fmt(value: float) -> str:
    return format(float(value), CELL_FORMAT)


def stderr_path(path: PathLike) -> Path:
    """Companion file holding standard errors: results.csv -> results.stderr.csv."""
    path = Path(path)
    return path.with_suffix(".stderr.csv")


def _write_grid(path: Path, heatmap: RateHeatmap, grid: np.ndarray) -> None:
    header = [f"{heatmap.axis2_name}\\{heatmap.axis1_name}"] + [_fmt(v) for v in heatmap.axis1_values]
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row, axis2_value in enumerate(heatmap.axis2_values):
            writer.writerow([_fmt(axis2_value)] + [_fmt(v) for v in grid[row]])


def emit_heatmap_csv(heatmap: RateHeatmap, path: PathLike) -> Tuple[Path, Path]:
    """Mean rates to `path`, standard errors to its companion file; returns both paths."""
    path = Path(path)
    companion = stderr_path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        _write_grid(path, heatmap, heatmap.mean)
        _write_grid(companion, heatmap, heatmap.std_error)
    except OSError as e:
        raise OutputError(f"cannot write heatmap CSV: {e.strerror or e}", str(path)) from e
    logger.info("Wrote %s (%d x %d)", path, *heatmap.shape)
    return path, companion


def _read_grid(path: Path) -> Tuple[str, str, np.ndarray, np.ndarray, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    if not rows or not rows[0]:
        raise InvalidInputError(f"{path}: empty heatmap CSV")
    corner = rows[0][0]
    if "\\" not in corner:
        raise InvalidInputError(f"{path}: header must start with 'axis2\\axis1', got {corner!r}")
    axis2_name, axis1_name = corner.split("\\", 1)
    try:
        axis1 = np.array([float(v) for v in rows[0][1:]])
        axis2 = np.array([float(row[0]) for row in rows[1:]])
        grid = np.array([[float(v) for v in row[1:]] for row in rows[1:]]).reshape(axis2.shape[0], axis1.shape[0])
    except ValueError as e:
        raise InvalidInputError(f"{path}: malformed heatmap CSV ({e})") from e
    return axis2_name, axis1_name, axis1, axis2, grid


def parse_heatmap_csv(path: PathLike) -> RateHeatmap:
    """Inverse of emit_heatmap_csv; standard errors are zero when the companion file is absent."""
    path = Path(path)
    try:
        axis2_name, axis1_name, axis1, axis2, mean = _read_grid(path)
        companion = stderr_path(path)
        std_error = _read_grid(companion)[4] if companion.exists() else np.zeros_like(mean)
    except OSError as e:
        raise OutputError(f"cannot read heatmap CSV: {e.strerror or e}", str(path)) from e
    kind = ROTATION_KIND if axis1_name == "phi_deg" else POWER_KIND
    return RateHeatmap(
        kind=kind,
        axis1_name=axis1_name,
        axis1_values=axis1,
        axis2_name=axis2_name,
        axis2_values=axis2,
        mean=mean,
        std_error=std_error,
        realizations=0,
        metadata={"source": str(path)},
    )


def emit_heatmap_json(heatmap: RateHeatmap, path: PathLike) -> Path:
    """Machine-readable form of the grid; mirrors the CSV content."""
    path = Path(path)
    payload = {
        "kind": heatmap.kind,
        "axis1": {"name": heatmap.axis1_name, "values": heatmap.axis1_values.tolist()},
        "axis2": {"name": heatmap.axis2_name, "values": heatmap.axis2_values.tolist()},
        "mean_rate": heatmap.mean.tolist(),
        "std_error": heatmap.std_error.tolist(),
        "realizations": heatmap.realizations,
        "config_digest": heatmap.metadata.get("config_digest"),
    }
    _write_json(path, payload)
    return path


def heatmap_argmax(heatmap: RateHeatmap) -> Tuple[int, int]:
    """(row, column) of the cell the optimum search would pick."""
    if heatmap.kind == ROTATION_KIND:
        angles, _ = find_optimal_orientation(heatmap)
        phis = [RotationAngles.of(float(v)).azimuth_deg for v in heatmap.axis1_values]
        thetas = [RotationAngles.of(0.0, float(v)).elevation_deg for v in heatmap.axis2_values]
        return thetas.index(angles.elevation_deg), phis.index(angles.azimuth_deg)
    row, column = np.unravel_index(int(np.argmax(heatmap.mean)), heatmap.shape)
    return int(row), int(column)


def _tick_step(count: int) -> int:
    return max(1, count // 12)


def emit_heatmap_image(heatmap: RateHeatmap, path: PathLike, title: Optional[str] = None) -> Path:
    """
    Render the grid as a self-contained SVG: viridis colormap, axis labels in the
    heatmap's units, and the argmax cell outlined in red (SVG id "argmax-cell").
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import seaborn as sns
    from matplotlib.patches import Rectangle

    path = Path(path)
    if heatmap.is_empty:
        raise InvalidInputError("cannot render an empty heatmap")
    row, column = heatmap_argmax(heatmap)

    with plt.rc_context({"svg.hashsalt": "ris-sim", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(8, 6) if heatmap.shape[0] > 1 else (8, 2.5))
        try:
            sns.heatmap(
                heatmap.mean,
                ax=ax,
                cmap=HEATMAP_COLORMAP,
                xticklabels=[_fmt(v) for v in heatmap.axis1_values],
                yticklabels=[_fmt(v) for v in heatmap.axis2_values],
                cbar_kws={"label": "achievable rate (bits/s/Hz)"},
            )
            step_x, step_y = _tick_step(heatmap.shape[1]), _tick_step(heatmap.shape[0])
            ax.set_xticks(ax.get_xticks()[::step_x])
            ax.set_xticklabels([_fmt(v) for v in heatmap.axis1_values[::step_x]])
            ax.set_yticks(ax.get_yticks()[::step_y])
            ax.set_yticklabels([_fmt(v) for v in heatmap.axis2_values[::step_y]])
            ax.invert_yaxis()
            ax.add_patch(
                Rectangle((column, row), 1, 1, fill=False, edgecolor="red", linewidth=2.0, gid=ARGMAX_GID)
            )
            ax.set_xlabel(_axis_label(heatmap.axis1_name))
            ax.set_ylabel(_axis_label(heatmap.axis2_name))
            if title:
                ax.set_title(title)
            fig.tight_layout()
            path.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as e:
            raise OutputError(f"cannot write heatmap image: {e.strerror or e}", str(path)) from e
        finally:
            plt.close(fig)
    logger.info("Wrote %s", path)
    return path


def _axis_label(name: str) -> str:
    labels = {
        "phi_deg": "azimuth rotation phi (deg)",
        "theta_deg": "elevation rotation theta (deg)",
        "pt_dBm": "transmit power Pt (dBm)",
        "ris_elements": "RIS elements N",
    }
    return labels.get(name, name)


def _write_json(path: Path, payload: dict) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise OutputError(f"cannot write JSON: {e.strerror or e}", str(path)) from e
    logger.info("Wrote %s", path)


def _angles_dict(angles: Optional[RotationAngles]) -> Optional[dict]:
    if angles is None:
        return None
    return {"phi_deg": angles.azimuth_deg, "theta_deg": angles.elevation_deg}


def emit_summary_json(
    path: PathLike,
    config_digest: Optional[str],
    rotation: Optional[RotationAngles],
    result: RateResult,
    argmax: Optional[RotationAngles] = None,
) -> Path:
    """{config_digest, rotation, mean_rate, std_error, argmax} with sorted keys."""
    path = Path(path)
    _write_json(
        path,
        {
            "config_digest": config_digest,
            "rotation": _angles_dict(rotation),
            "mean_rate": result.mean_rate,
            "std_error": result.std_error,
            "argmax": _angles_dict(argmax),
        },
    )
    return path


class RunManifest(BaseModel):
    """Provenance record written next to a run's outputs."""

    model_config = ConfigDict(frozen=True)

    config_digest: Optional[str] = Field(None, description="sha256 of the canonical config")
    tool_version: str = Field(TOOL_VERSION)
    seed: Optional[int] = Field(None, description="master seed of the run")
    command: str = Field(..., description="subcommand that produced the outputs")
    started_at: str
    finished_at: str
    outputs: List[str] = Field(default_factory=list)


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def write_manifest(manifest: RunManifest, out_dir: PathLike) -> Path:
    path = Path(out_dir) / MANIFEST_NAME
    _write_json(path, manifest.model_dump(mode="json"))
    return path


def write_canonical_config(spec: SweepSpec, out_dir: PathLike) -> Path:
    """config.json next to the manifest; reloading it reproduces the manifest's config_digest."""
    path = Path(out_dir) / CONFIG_NAME
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_canonical_config(spec), encoding="utf-8")
    except OSError as e:
        raise OutputError(f"cannot write canonical config: {e.strerror or e}", str(path)) from e
    logger.info("Wrote %s", path)
    return path
