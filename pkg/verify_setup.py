"""
ris-orientation-sim installation check.
Confirms the scientific stack imports, the ris_sim package loads, and a tiny
scenario runs end to end.
"""
import os
import sys
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from dotenv import load_dotenv
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

load_dotenv()
console = Console()

# distribution name -> (import name, description, required)
PACKAGES = {
    "numpy": ("numpy", "Linear algebra and random streams", True),
    "scipy": ("scipy", "Physical constants", True),
    "pydantic": ("pydantic", "Config schema", True),
    "pyyaml": ("yaml", "Scenario files", True),
    "matplotlib": ("matplotlib", "SVG rendering", True),
    "seaborn": ("seaborn", "Heatmaps", True),
    "python-dotenv": ("dotenv", "Environment management", True),
    "rich": ("rich", "Terminal formatting", True),
    "pytest": ("pytest", "Testing framework", False),
}


def print_header():
    console.print(Panel.fit("📡 ris-orientation-sim Installation Verification", style="bold blue"))


def check_python_version():
    info = sys.version_info
    console.print("\n[bold cyan]📐 Python Environment:[/bold cyan]")
    console.print(f"   Python version: {info.major}.{info.minor}.{info.micro}")
    console.print(f"   Python path: {sys.executable}")
    if info < (3, 11):
        return False, "Python 3.11+ is required"
    return True, None


def check_package_installation():
    console.print("\n[bold cyan]📦 Package Installation Status:[/bold cyan]")
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Package", style="cyan", no_wrap=True)
    table.add_column("Status", justify="center")
    table.add_column("Version", style="green")
    table.add_column("Notes", style="yellow")

    all_good = True
    for dist_name, (import_name, description, required) in PACKAGES.items():
        try:
            pkg_version = version(dist_name)
        except PackageNotFoundError:
            if required:
                all_good = False
                table.add_row(dist_name, "❌", "Not installed", f"{description} (REQUIRED)")
            else:
                table.add_row(dist_name, "○", "Not installed", f"{description} (optional)")
            continue
        try:
            __import__(import_name)
            table.add_row(dist_name, "✅", pkg_version, description)
        except ImportError:
            all_good = all_good and not required
            table.add_row(dist_name, "⚠️", pkg_version, f"{description} (installed but can't import)")

    console.print(table)
    return all_good


def check_ris_sim():
    """Import the package and run a 2-realization scenario through the rate pipeline."""
    console.print("\n[bold cyan]🔧 ris_sim Components:[/bold cyan]")
    try:
        import ris_sim
        from ris_sim import RotationAngles, ScenarioConfig, ergodic_rate
    except ImportError as e:
        console.print(f"   ❌ Cannot import ris_sim: [red]{e}[/red]")
        return False
    console.print(f"   ✅ ris_sim {ris_sim.__version__}")

    config = ScenarioConfig.model_validate(
        {
            "layout": {"tx_pos": [0, 25, 2], "rx_pos": [45, 45, 1], "ris_pos": [40, 50, 2]},
            "bs_array": {"kind": "ULA", "nx": 2},
            "user_array": {"kind": "ULA", "nx": 2},
            "ris_array": {"kind": "UPA", "nx": 4, "ny": 4},
            "realizations": 2,
        }
    )
    try:
        result = ergodic_rate(config, RotationAngles.of(10, 20))
    except Exception as e:
        console.print(f"   ❌ Smoke run failed: [red]{e}[/red]")
        return False
    console.print(f"   ✅ Smoke run: {result.mean_rate:.4f} bits/s/Hz over {result.realizations_used} realizations")
    return True


def check_runtime_settings():
    console.print("\n[bold cyan]⚙️  Runtime Settings:[/bold cyan]")
    for name, default in (("RIS_SIM_THREADS", f"CPU count ({os.cpu_count()})"), ("RIS_SIM_LOG_LEVEL", "INFO")):
        value = os.getenv(name)
        if value:
            console.print(f"   ✅ {name} = [green]{value}[/green]")
        else:
            console.print(f"   ℹ️  {name} not set (default: {default})")
    if Path(".env").exists():
        console.print("   ✅ .env file found")


def suggest_fixes():
    console.print(
        Panel(
            "[bold yellow]💡 To fix installation issues:[/bold yellow]\n\n"
            "1. Install the package with its test tools:\n"
            '   [cyan]pip install -e ".[dev]"[/cyan]\n\n'
            "2. Or install the requirements only:\n"
            "   [cyan]pip install -r requirements.txt[/cyan]\n\n"
            "3. For a virtual environment (recommended):\n"
            "   [cyan]python -m venv venv\n"
            "   source venv/bin/activate  # On Windows: venv\\Scripts\\activate\n"
            '   pip install -e ".[dev]"[/cyan]',
            style="yellow",
        )
    )


def main():
    print_header()
    py_ok, py_error = check_python_version()
    pkg_ok = check_package_installation()
    sim_ok = pkg_ok and check_ris_sim()
    check_runtime_settings()

    console.print("\n" + "=" * 60)
    if not py_ok:
        console.print(f"[bold red]❌ Python Version Issue: {py_error}[/bold red]")
    elif not (pkg_ok and sim_ok):
        console.print("[bold red]❌ Some packages are missing or not working[/bold red]")
        suggest_fixes()
    else:
        console.print("[bold green]✅ Installation Complete![/bold green]")
        console.print("\n[bold cyan]📖 Next Steps:[/bold cyan]")
        console.print("   1. Check a scenario: [cyan]ris-sim validate configs/reference_indoor_upa.yaml[/cyan]")
        console.print("   2. Power sweep: [cyan]ris-sim power-sweep configs/reference_indoor_upa.yaml --image[/cyan]")
        console.print("   3. Demos: [cyan]python demos/demo_joint_heatmap.py --realizations 10[/cyan]")
    return py_ok and pkg_ok and sim_ok


if __name__ == "__main__":
    try:
        success = main()
        sys.exit(0 if success else 1)
    except Exception as e:
        console.print(f"[bold red]❌ Unexpected error: {e}[/bold red]")
        sys.exit(1)
