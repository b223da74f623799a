"""Shared scenario fixtures. Reference geometry: BS (0, 25, 2), user (45, 45, 1), RIS (40, 50, 2)."""
import pytest

from ris_sim.config import ScenarioConfig, SweepSpec

REFERENCE_LAYOUT = {"tx_pos": [0, 25, 2], "rx_pos": [45, 45, 1], "ris_pos": [40, 50, 2]}

SMALL_ARRAYS = {
    "bs_array": {"kind": "ULA", "nx": 2},
    "user_array": {"kind": "ULA", "nx": 2},
    "ris_array": {"kind": "UPA", "nx": 4, "ny": 4, "pattern_exponent": 1.0, "hemisphere_cutoff": True},
}

# Narrow clusters keep every path well inside one hemisphere of the panel.
NARROW_CLUSTERS = {"center_spread_deg": 5.0, "angular_spread_deg": 1.0}


def build_config(**overrides) -> ScenarioConfig:
    data = {"layout": dict(REFERENCE_LAYOUT), **SMALL_ARRAYS, "realizations": 6, "master_seed": 11}
    layout = overrides.pop("layout", None)
    if layout:
        data["layout"] = {**data["layout"], **layout}
    data.update(overrides)
    return ScenarioConfig.model_validate(data)


@pytest.fixture
def make_config():
    """Factory for small reference-geometry scenarios; keyword arguments override fields."""
    return build_config


@pytest.fixture
def small_config() -> ScenarioConfig:
    return build_config()


@pytest.fixture
def narrow_config() -> ScenarioConfig:
    return build_config(cluster_params=NARROW_CLUSTERS)


@pytest.fixture
def small_sweep() -> SweepSpec:
    return SweepSpec(
        scenario=build_config(pt_dBm=20),
        azimuth={"start": 0, "stop": 330, "step": 30},
        elevation={"start": 0, "stop": 330, "step": 30},
        powers_dBm=[0, 20, 40],
    )


def pytest_addoption(parser):
    parser.addoption("--update-golden", action="store_true", default=False, help="rewrite files under tests/golden")


@pytest.fixture
def update_golden(request) -> bool:
    return request.config.getoption("--update-golden")
