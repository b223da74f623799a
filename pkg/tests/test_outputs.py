import json
from pathlib import Path

import numpy as np
import pytest

from ris_sim.errors import InvalidInputError
from ris_sim.geometry import RotationAngles
from ris_sim.outputs import (
    ARGMAX_GID,
    MANIFEST_NAME,
    RunManifest,
    emit_heatmap_csv,
    emit_heatmap_image,
    emit_heatmap_json,
    emit_summary_json,
    heatmap_argmax,
    parse_heatmap_csv,
    stderr_path,
    write_manifest,
)
from ris_sim.rate import RateResult
from ris_sim.sweep import POWER_KIND, ROTATION_KIND, RateHeatmap, find_optimal_orientation

GOLDEN_DIR = Path(__file__).parent / "golden"


def _rotation_heatmap(mean, phis=None, thetas=None):
    mean = np.asarray(mean, dtype=float)
    phis = np.arange(mean.shape[1]) * 10.0 if phis is None else phis
    thetas = np.arange(mean.shape[0]) * 10.0 if thetas is None else thetas
    return RateHeatmap(
        kind=ROTATION_KIND,
        axis1_name="phi_deg",
        axis1_values=phis,
        axis2_name="theta_deg",
        axis2_values=thetas,
        mean=mean,
        std_error=mean / 100.0,
        realizations=10,
        metadata={"config_digest": "ab" * 32},
    )


class TestHeatmapCsv:
    """Test suite for the CSV result format"""

    def test_single_cell_layout(self, tmp_path):
        """Test a 1 x 1 heatmap writes a header line and one data line"""
        path, companion = emit_heatmap_csv(_rotation_heatmap([[12.5]], [170.0], [150.0]), tmp_path / "one.csv")
        assert path.read_text() == "theta_deg\\phi_deg,170\n150,12.5\n"
        assert companion == stderr_path(path)
        assert companion.read_text() == "theta_deg\\phi_deg,170\n150,0.125\n"

    def test_full_grid_shape(self, tmp_path):
        """Test a 36 x 36 grid gives 37 rows of 37 columns"""
        mean = np.random.default_rng(0).uniform(0, 30, size=(36, 36))
        path, _ = emit_heatmap_csv(_rotation_heatmap(mean), tmp_path / "grid.csv")
        rows = path.read_text().splitlines()
        assert len(rows) == 37
        assert all(len(row.split(",")) == 37 for row in rows)

    def test_nine_significant_digits(self, tmp_path):
        """Test cells are written with 9 significant digits"""
        path, _ = emit_heatmap_csv(_rotation_heatmap([[1.0 / 3.0]]), tmp_path / "d.csv")
        assert path.read_text().splitlines()[1] == "0,0.333333333"

    def test_round_trip(self, tmp_path):
        """Test parsing reproduces every mean rate to the emitted digits"""
        mean = np.random.default_rng(1).uniform(0, 40, size=(4, 6))
        heatmap = _rotation_heatmap(mean)
        path, _ = emit_heatmap_csv(heatmap, tmp_path / "rt.csv")
        parsed = parse_heatmap_csv(path)
        assert parsed.kind == ROTATION_KIND
        np.testing.assert_array_equal(parsed.axis1_values, heatmap.axis1_values)
        np.testing.assert_array_equal(parsed.axis2_values, heatmap.axis2_values)
        expected = np.array([[float(format(v, ".9g")) for v in row] for row in mean])
        np.testing.assert_array_equal(parsed.mean, expected)
        np.testing.assert_allclose(parsed.std_error, mean / 100.0, rtol=1e-8)

    def test_round_trip_preserves_optimum(self, tmp_path):
        """Test the optimum of a parsed heatmap equals the optimum of the original"""
        mean = np.random.default_rng(2).uniform(0, 40, size=(5, 5))
        heatmap = _rotation_heatmap(mean)
        path, _ = emit_heatmap_csv(heatmap, tmp_path / "opt.csv")
        assert find_optimal_orientation(parse_heatmap_csv(path))[0] == find_optimal_orientation(heatmap)[0]

    def test_missing_companion_gives_zero_errors(self, tmp_path):
        """Test a CSV without its std-error file parses with zero errors"""
        path, companion = emit_heatmap_csv(_rotation_heatmap([[1.0, 2.0]]), tmp_path / "x.csv")
        companion.unlink()
        assert not np.any(parse_heatmap_csv(path).std_error)

    def test_power_heatmap_kind(self, tmp_path):
        """Test a power-axis CSV parses as a power heatmap"""
        heatmap = RateHeatmap(POWER_KIND, "pt_dBm", [0, 10], "ris_elements", [64], [[1.0, 2.0]], [[0.1, 0.1]], 5)
        path, _ = emit_heatmap_csv(heatmap, tmp_path / "power.csv")
        assert path.read_text().splitlines()[0] == "ris_elements\\pt_dBm,0,10"
        assert parse_heatmap_csv(path).kind == POWER_KIND

    def test_malformed_header(self, tmp_path):
        """Test a CSV without the axis header is rejected"""
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        with pytest.raises(InvalidInputError):
            parse_heatmap_csv(bad)

    def test_byte_identical_rewrite(self, tmp_path):
        """Test writing the same heatmap twice gives identical bytes"""
        heatmap = _rotation_heatmap(np.random.default_rng(3).uniform(0, 9, size=(3, 3)))
        a, _ = emit_heatmap_csv(heatmap, tmp_path / "a.csv")
        b, _ = emit_heatmap_csv(heatmap, tmp_path / "b.csv")
        assert a.read_bytes() == b.read_bytes()


class TestHeatmapImage:
    """Test suite for SVG rendering"""

    def test_argmax_marked(self, tmp_path):
        """Test a 2 x 2 grid renders as SVG with the outlined maximum"""
        path = emit_heatmap_image(_rotation_heatmap([[1.0, 2.0], [3.0, 0.5]]), tmp_path / "h.svg")
        text = path.read_text()
        assert text.lstrip().startswith("<?xml")
        assert f'id="{ARGMAX_GID}"' in text
        assert heatmap_argmax(_rotation_heatmap([[1.0, 2.0], [3.0, 0.5]])) == (1, 0)

    def test_uniform_grid_argmax_at_origin(self):
        """Test an all-equal grid marks the tie-break cell"""
        assert heatmap_argmax(_rotation_heatmap(np.full((3, 3), 7.0))) == (0, 0)

    def test_deterministic_svg(self, tmp_path):
        """Test rendering the same input twice gives byte-identical SVG"""
        heatmap = _rotation_heatmap(np.random.default_rng(4).uniform(0, 20, size=(6, 6)))
        a = emit_heatmap_image(heatmap, tmp_path / "a.svg")
        b = emit_heatmap_image(heatmap, tmp_path / "b.svg")
        assert a.read_bytes() == b.read_bytes()

    def test_matches_golden_svg(self, tmp_path, update_golden):
        """Test a fixed 3 x 4 grid renders byte-identical to the frozen SVG"""
        rendered = emit_heatmap_image(_rotation_heatmap(np.arange(12.0).reshape(3, 4)), tmp_path / "h.svg").read_bytes()
        golden = GOLDEN_DIR / "heatmap_3x4.svg"
        if update_golden:
            golden.parent.mkdir(parents=True, exist_ok=True)
            golden.write_bytes(rendered)
        if not golden.exists():
            pytest.skip(f"No golden SVG at {golden}. Run `pytest --update-golden`, inspect it, and commit it.")
        assert rendered == golden.read_bytes(), "SVG output changed; rerun with --update-golden if intended"


class TestSummaryAndManifest:
    """Test suite for JSON artifacts"""

    def test_summary_fields(self, tmp_path):
        """Test the summary carries digest, rotation, rate, error and argmax with sorted keys"""
        path = emit_summary_json(
            tmp_path / "s.json", "f" * 64, RotationAngles.of(170, 150), RateResult(3.5, 0.25, 10), RotationAngles.of(170, 150)
        )
        text = path.read_text()
        data = json.loads(text)
        assert list(data) == sorted(data)
        assert data == {
            "argmax": {"phi_deg": 170.0, "theta_deg": 150.0},
            "config_digest": "f" * 64,
            "mean_rate": 3.5,
            "rotation": {"phi_deg": 170.0, "theta_deg": 150.0},
            "std_error": 0.25,
        }

    def test_heatmap_json(self, tmp_path):
        """Test the JSON heatmap mirrors the grid"""
        heatmap = _rotation_heatmap([[1.0, 2.0]])
        data = json.loads(emit_heatmap_json(heatmap, tmp_path / "h.json").read_text())
        assert data["mean_rate"] == [[1.0, 2.0]]
        assert data["axis1"] == {"name": "phi_deg", "values": [0.0, 10.0]}

    def test_manifest(self, tmp_path):
        """Test the manifest is written as manifest.json with its provenance fields"""
        manifest = RunManifest(
            config_digest="0" * 64, seed=7, command="sweep", started_at="t0", finished_at="t1", outputs=["a.csv"]
        )
        path = write_manifest(manifest, tmp_path)
        assert path.name == MANIFEST_NAME
        data = json.loads(path.read_text())
        assert data["seed"] == 7
        assert data["outputs"] == ["a.csv"]
        assert data["tool_version"]
