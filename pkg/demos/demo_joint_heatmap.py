# demo_joint_heatmap.py
"""
================================================================================
        Joint Azimuth/Elevation Heatmap and Optimal Orientation
================================================================================

**Purpose:**
Sweeps the RIS over every (phi, theta) pair on the config's grids, writes the
heatmap as CSV and SVG, and reports the best orientation. Several transmit
powers can be requested at once; they share one channel pass, so extra powers
cost almost nothing.

**How to Use This Tool**
Reference configs (configs/): reference_{indoor,outdoor}_{upa,ula}.yaml use 4x2 or
8-element nodes with an 8x8 RIS; reference_{indoor,outdoor}_{upa,ula}_64x256.yaml use
64-antenna nodes with a 16x16 RIS; reference_{indoor,outdoor}_n256.yaml pair the small
nodes with the 16x16 RIS.
```bash
python demos/demo_joint_heatmap.py --config configs/reference_indoor_upa.yaml --powers 10 30 50
python demos/demo_joint_heatmap.py --config configs/reference_outdoor_upa_64x256.yaml --realizations 10
```
A full 36 x 36 grid with M = 100 takes a few minutes; lower `realizations` in
the config (or pass --realizations) for a quick look.
================================================================================
"""
import argparse
import logging
from pathlib import Path

from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from ris_sim import emit_heatmap_csv, emit_heatmap_image, find_optimal_orientation, load_config, run_rotation_family

load_dotenv()

logging.basicConfig(level="INFO", format="%(message)s", handlers=[RichHandler(show_path=False)])
logger = logging.getLogger(__name__)


def main(config: Path, powers, realizations, output: Path, threads) -> None:
    console = Console()
    _, spec = load_config(config)
    if realizations:
        spec = spec.model_copy(update={"scenario": spec.scenario.model_copy(update={"realizations": realizations})})

    family = run_rotation_family(spec, "joint", powers or [spec.scenario.pt_dBm], threads=threads)

    table = Table(title=f"Optimal orientation ({config.name}, M = {spec.scenario.realizations})")
    table.add_column("Pt (dBm)", justify="right")
    table.add_column("phi (deg)", justify="right")
    table.add_column("theta (deg)", justify="right")
    table.add_column("rate (bits/s/Hz)", justify="right")
    table.add_column("zero cells", justify="right")
    for power, heatmap in family.items():
        angles, best = find_optimal_orientation(heatmap)
        table.add_row(
            f"{power:g}",
            f"{angles.azimuth_deg:g}",
            f"{angles.elevation_deg:g}",
            f"{best.mean_rate:.3f} +/- {best.std_error:.3f}",
            f"{heatmap.zero_fraction():.0%}",
        )
        stem = f"joint_{power:g}dBm"
        emit_heatmap_csv(heatmap, output / f"{stem}.csv")
        emit_heatmap_image(heatmap, output / f"{stem}.svg", title=f"Pt = {power:g} dBm")
    console.print(table)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Joint rotation heatmap of a UAV-mounted RIS")
    parser.add_argument("--config", type=Path, default=Path("configs/reference_indoor_upa.yaml"), help="Scenario file.")
    parser.add_argument("--powers", type=float, nargs="*", help="Transmit powers in dBm (default: the config's pt_dBm).")
    parser.add_argument("--realizations", type=int, default=None, help="Override M for a faster run.")
    parser.add_argument("--output", type=Path, default=Path("demos/outputs"), help="Directory for CSV and SVG files.")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads.")
    args = parser.parse_args()

    main(args.config, args.powers, args.realizations, args.output, args.threads)
