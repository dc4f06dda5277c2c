"""The example configs shipped under data/configs stay valid and run end to end."""
import json
from pathlib import Path

import pytest

from adlab import CONFIGS_DIR
from adlab.cli import EXIT_OK, main
from adlab.pipeline import build_model
from adlab.schema import load_config

CONFIG_FILES = sorted(Path(CONFIGS_DIR).glob("*.json"))


@pytest.mark.parametrize("path", CONFIG_FILES, ids=lambda p: p.name)
def test_shipped_config_is_valid(path):
    """Every shipped config loads and builds its model."""
    config = load_config(path)
    points = [c for _, c in config.sweep_points()] if config.sweep else [config]
    for point in points:
        assert build_model(point).dimension == 2


@pytest.mark.parametrize("path", CONFIG_FILES, ids=lambda p: p.name)
def test_shipped_config_runs(path, tmp_path):
    """Every shipped config runs end to end and writes its manifest."""
    out = tmp_path / path.stem
    assert main(["run", "--config", str(path), "--out", str(out)]) == EXIT_OK
    assert (out / "manifest.json").exists()


def test_flagship_config_marks_undefined_phases(tmp_path):
    """At θ = π/2 the half-period point is on the grid: the phase columns there are
    flagged in the manifest and the later diagnostics still run."""
    out = tmp_path / "schwinger_all"
    assert main(["run", "--config", str(Path(CONFIGS_DIR) / "schwinger_all.json"), "--out", str(out)]) == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    assert "geom_openpath" in manifest["summary"]["phases_undefined"]
    for stem in ("phases", "ms_report", "epsilon", "fidelity"):
        assert (out / f"{stem}.csv").exists()
