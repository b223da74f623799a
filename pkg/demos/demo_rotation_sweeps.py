# demo_rotation_sweeps.py
"""
================================================================================
        Single-Axis Rotation Sweeps: Frozen vs Re-optimized Phases
================================================================================

**Purpose:**
Rotates the RIS about one axis at a time (azimuth with elevation held at 0, then
elevation with azimuth held at 0) and compares two phase policies:

  - frozen: phases are aligned once at rotation (0, 0) and kept while the panel turns.
  - reoptimize: phases are re-aligned at every orientation.

Orientations that put the transmitter or the user behind the panel give exactly
zero rate under both policies, since the direct link is blocked.

**How to Use This Tool**
Reference configs (configs/): reference_{indoor,outdoor}_{upa,ula}.yaml use 4x2 or
8-element nodes with an 8x8 RIS; reference_{indoor,outdoor}_{upa,ula}_64x256.yaml use
64-antenna nodes with a 16x16 RIS; reference_{indoor,outdoor}_n256.yaml pair the small
nodes with the 16x16 RIS.
```bash
python demos/demo_rotation_sweeps.py --config configs/reference_indoor_upa.yaml --power 30
python demos/demo_rotation_sweeps.py --config configs/reference_indoor_ula_64x256.yaml --power 30
```
================================================================================
"""
import argparse
import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import seaborn as sns
from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from ris_sim import PhaseMode, SweepAxis, find_optimal_orientation, load_config, run_rotation_sweep

load_dotenv()

logging.basicConfig(level="INFO", format="%(message)s", handlers=[RichHandler(show_path=False)])
logger = logging.getLogger(__name__)


def sweep_both_modes(spec, axis: SweepAxis, threads):
    curves = {}
    for mode in PhaseMode:
        logger.info(f"--- {axis.value} sweep, {mode.value} phases ---")
        curves[mode.value] = run_rotation_sweep(spec.model_copy(update={"phase_mode": mode}), axis, threads=threads)
    return curves


def main(config: Path, power: float, output: Path, threads) -> None:
    console = Console()
    _, spec = load_config(config)
    spec = spec.model_copy(update={"scenario": spec.scenario.model_copy(update={"pt_dBm": power})})

    output.mkdir(parents=True, exist_ok=True)
    fig, axes = plt.subplots(1, 2, figsize=(12, 4.5))
    table = Table(title=f"Best single-axis orientation at Pt = {power:g} dBm")
    table.add_column("axis")
    table.add_column("phases")
    table.add_column("phi (deg)", justify="right")
    table.add_column("theta (deg)", justify="right")
    table.add_column("rate (bits/s/Hz)", justify="right")
    table.add_column("zero cells", justify="right")

    for ax, axis in zip(axes, (SweepAxis.AZIMUTH, SweepAxis.ELEVATION)):
        for mode, heatmap in sweep_both_modes(spec, axis, threads).items():
            angles, best = find_optimal_orientation(heatmap)
            table.add_row(
                axis.value,
                mode,
                f"{angles.azimuth_deg:g}",
                f"{angles.elevation_deg:g}",
                f"{best.mean_rate:.3f}",
                f"{heatmap.zero_fraction():.0%}",
            )
            x = heatmap.axis1_values if axis == SweepAxis.AZIMUTH else heatmap.axis2_values
            sns.lineplot(x=x, y=heatmap.mean.ravel(), label=mode, ax=ax)
        ax.set_xlabel("azimuth rotation phi (deg)" if axis == SweepAxis.AZIMUTH else "elevation rotation theta (deg)")
        ax.set_ylabel("achievable rate (bits/s/Hz)")
        ax.grid(True, alpha=0.3)

    console.print(table)
    fig.tight_layout()
    figure = output / "rotation_sweeps.svg"
    fig.savefig(figure, format="svg", metadata={"Date": None})
    plt.close(fig)
    console.print(f"[bold green]Saved plot to {figure}[/bold green]")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Azimuth-only and elevation-only RIS rotation sweeps")
    parser.add_argument("--config", type=Path, default=Path("configs/reference_indoor_upa.yaml"), help="Scenario file.")
    parser.add_argument("--power", type=float, default=30.0, help="Transmit power in dBm.")
    parser.add_argument("--output", type=Path, default=Path("demos/outputs"), help="Directory for the plot.")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads.")
    args = parser.parse_args()

    main(args.config, args.power, args.output, args.threads)
