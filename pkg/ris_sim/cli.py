"""
Command-line entry point: `ris-sim <command> <config> [options]`.

Commands
    validate <config>                     check deployment rules, list every violation
    rate <config> --phi P --theta T       ergodic rate at one orientation
    power-sweep <config>                  rate versus transmit power at rotation (0, 0)
    sweep <config> [--axis az|el|joint]   rotation sweep heatmap
    optimize <config|heatmap.csv>         best orientation (sweeps jointly unless given a CSV)

Exit codes: 0 success, 2 invalid scenario or config, 1 runtime error, 64 usage error.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .channel import scenario_notes, validate_scenario
from .config import PhaseMode, PhaseStrategy, ScenarioConfig, SweepSpec, config_digest
from .errors import ConfigError, RisSimError, ScenarioValidationError
from .geometry import RotationAngles
from .loader import load_config, with_overrides
from .outputs import (
    RunManifest,
    emit_heatmap_csv,
    emit_heatmap_image,
    emit_heatmap_json,
    emit_summary_json,
    parse_heatmap_csv,
    utc_now,
    write_canonical_config,
    write_manifest,
)
from .rate import ergodic_rate
from .settings import load_settings
from .sweep import ROTATION_KIND, RateHeatmap, SweepAxis, find_optimal_orientation, run_power_sweep, run_rotation_sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_INVALID = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports bad usage by raising instead of exiting with 2."""

    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _common_options() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the config's master seed")
    common.add_argument("--out", type=Path, default=Path("results"), help="output directory (default: results)")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: RIS_SIM_THREADS or CPU count)")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="result file format")
    common.add_argument("--image", action="store_true", help="also render the heatmap as SVG")
    common.add_argument("--allow-invalid", action="store_true", help="run even if deployment rules are violated")
    common.add_argument("--power", type=float, default=None, help="transmit power override (dBm)")
    common.add_argument("--strategy", choices=[s.value for s in PhaseStrategy], default=None)
    common.add_argument("--phase-mode", choices=[m.value for m in PhaseMode], default=None)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(prog="ris-sim", description="Rotation-aware RIS MIMO rate simulator")
    commands = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    commands.required = True

    validate = commands.add_parser("validate", parents=[common], help="check a scenario against deployment rules")
    validate.add_argument("config")

    rate = commands.add_parser("rate", parents=[common], help="ergodic rate at one orientation")
    rate.add_argument("config")
    rate.add_argument("--phi", type=float, default=0.0, help="azimuth rotation (deg)")
    rate.add_argument("--theta", type=float, default=0.0, help="elevation rotation (deg)")

    power = commands.add_parser("power-sweep", parents=[common], help="rate versus transmit power")
    power.add_argument("config")

    sweep = commands.add_parser("sweep", parents=[common], help="rotation sweep heatmap")
    sweep.add_argument("config")
    sweep.add_argument("--axis", choices=[a.value for a in SweepAxis], default=SweepAxis.JOINT.value)

    optimize = commands.add_parser("optimize", parents=[common], help="best orientation of a config or heatmap CSV")
    optimize.add_argument("config")
    return parser


def configure_logging(verbose: bool = False) -> None:
    settings = load_settings()
    logging.basicConfig(
        level="DEBUG" if verbose else settings.log_level,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )
    for problem in settings.ignored:
        logger.warning("Ignoring setting: %s", problem)


def _load(args) -> SweepSpec:
    _, spec = load_config(args.config, allow_invalid=args.allow_invalid)
    return with_overrides(spec, seed=args.seed, power_dBm=args.power, strategy=args.strategy, phase_mode=args.phase_mode)


def _write_heatmap(heatmap: RateHeatmap, args, stem: str, outputs: List[Path]) -> None:
    out = Path(args.out)
    if args.format == "json":
        outputs.append(emit_heatmap_json(heatmap, out / f"{stem}.json"))
    else:
        outputs.extend(emit_heatmap_csv(heatmap, out / f"{stem}.csv"))
    if args.image:
        outputs.append(emit_heatmap_image(heatmap, out / f"{stem}.svg"))


def _finish(args, command: str, spec: Optional[SweepSpec], started: str, outputs: List[Path]) -> None:
    digest, seed = None, None
    if spec is not None:
        digest, seed = config_digest(spec), spec.scenario.master_seed
        outputs.append(write_canonical_config(spec, args.out))
    manifest = RunManifest(
        config_digest=digest,
        seed=seed,
        command=command,
        started_at=started,
        finished_at=utc_now(),
        outputs=sorted(str(p.name) for p in outputs),
    )
    write_manifest(manifest, args.out)


def cmd_validate(args, console: Console) -> int:
    scenario, spec = load_config(args.config, allow_invalid=True)
    violations = validate_scenario(scenario)
    table = Table(title=f"Scenario check: {args.config}")
    table.add_column("Status")
    table.add_column("Detail")
    for violation in violations:
        table.add_row("[red]violation[/red]", violation)
    for note in scenario_notes(scenario):
        table.add_row("[yellow]note[/yellow]", note)
    if not violations:
        table.add_row("[green]ok[/green]", f"digest {config_digest(spec)}")
    console.print(table)
    return EXIT_INVALID if violations else EXIT_OK


def cmd_rate(args, console: Console) -> int:
    started = utc_now()
    spec = _load(args)
    scenario: ScenarioConfig = spec.scenario
    if spec.phase_mode is not None:
        scenario = scenario.model_copy(update={"phase_mode": spec.phase_mode})
    rotation = RotationAngles.of(args.phi, args.theta)
    result = ergodic_rate(scenario, rotation, spec.strategy, allow_invalid=args.allow_invalid)
    console.print(
        f"rate at phi={rotation.azimuth_deg:g} theta={rotation.elevation_deg:g}: "
        f"{result.mean_rate:.9g} bits/s/Hz (std error {result.std_error:.3g}, M={result.realizations_used})"
    )

    digest = config_digest(spec)
    out = Path(args.out)
    if args.format == "json":
        outputs = [emit_summary_json(out / "rate.json", digest, rotation, result)]
    else:
        heatmap = RateHeatmap(
            kind=ROTATION_KIND,
            axis1_name="phi_deg",
            axis1_values=[rotation.azimuth_deg],
            axis2_name="theta_deg",
            axis2_values=[rotation.elevation_deg],
            mean=[[result.mean_rate]],
            std_error=[[result.std_error]],
            realizations=result.realizations_used,
        )
        outputs = list(emit_heatmap_csv(heatmap, out / "rate.csv"))
    _finish(args, "rate", spec, started, outputs)
    return EXIT_OK


def cmd_power_sweep(args, console: Console) -> int:
    started = utc_now()
    spec = _load(args)
    heatmap = run_power_sweep(spec, threads=args.threads, allow_invalid=args.allow_invalid)

    table = Table(title=f"Rate vs transmit power (N = {spec.scenario.n_ris})")
    table.add_column("Pt (dBm)", justify="right")
    table.add_column("rate (bits/s/Hz)", justify="right")
    table.add_column("std error", justify="right")
    for column, power in enumerate(heatmap.axis1_values):
        table.add_row(f"{power:g}", f"{heatmap.mean[0, column]:.6f}", f"{heatmap.std_error[0, column]:.3g}")
    console.print(table)

    outputs: List[Path] = []
    _write_heatmap(heatmap, args, "power_sweep", outputs)
    _finish(args, "power-sweep", spec, started, outputs)
    return EXIT_OK


def _report_optimum(console: Console, angles: RotationAngles, rate: float, std_error: float) -> None:
    console.print(
        f"optimal orientation: phi={angles.azimuth_deg:g} theta={angles.elevation_deg:g} "
        f"rate={rate:.9g} bits/s/Hz (std error {std_error:.3g})"
    )


def cmd_sweep(args, console: Console) -> int:
    started = utc_now()
    spec = _load(args)
    axis = SweepAxis.parse(args.axis)
    heatmap = run_rotation_sweep(spec, axis, threads=args.threads, allow_invalid=args.allow_invalid)
    angles, best = find_optimal_orientation(heatmap)
    _report_optimum(console, angles, best.mean_rate, best.std_error)
    console.print(f"zero-rate cells: {heatmap.zero_fraction():.1%} of {heatmap.mean.size}")

    digest = heatmap.metadata["config_digest"]
    outputs: List[Path] = []
    _write_heatmap(heatmap, args, f"sweep_{axis.value}", outputs)
    outputs.append(emit_summary_json(Path(args.out) / f"sweep_{axis.value}_summary.json", digest, angles, best, angles))
    _finish(args, "sweep", spec, started, outputs)
    return EXIT_OK


def cmd_optimize(args, console: Console) -> int:
    started = utc_now()
    source = Path(args.config)
    if source.suffix.lower() == ".csv":
        spec: Optional[SweepSpec] = None
        heatmap = parse_heatmap_csv(source)
        digest = None
    else:
        spec = _load(args)
        heatmap = run_rotation_sweep(spec, SweepAxis.JOINT, threads=args.threads, allow_invalid=args.allow_invalid)
        digest = heatmap.metadata["config_digest"]

    angles, best = find_optimal_orientation(heatmap)
    _report_optimum(console, angles, best.mean_rate, best.std_error)
    outputs = [emit_summary_json(Path(args.out) / "optimize_summary.json", digest, angles, best, angles)]
    _finish(args, "optimize", spec, started, outputs)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "rate": cmd_rate,
    "power-sweep": cmd_power_sweep,
    "sweep": cmd_sweep,
    "optimize": cmd_optimize,
}


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    configure_logging(args.verbose)
    console = Console()
    try:
        return COMMANDS[args.command](args, console)
    except ScenarioValidationError as e:
        logger.error("Scenario is invalid:")
        for violation in e.violations:
            logger.error("  - %s", violation)
        return EXIT_INVALID
    except ConfigError as e:
        logger.error(f"Config error: {e}")
        return EXIT_INVALID
    except RisSimError as e:
        logger.error(f"{args.command} failed: {e}", exc_info=args.verbose)
        return EXIT_RUNTIME
    except Exception as e:
        logger.error(f"Unexpected error in {args.command}: {e}", exc_info=True)
        return EXIT_RUNTIME


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
