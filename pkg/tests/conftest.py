"""Pytest configuration and fixtures for colored-scatter tests."""

import tempfile
from pathlib import Path
from typing import Generator

import pytest

from colored_scatter.config import RunConfig
from colored_scatter.kernel import AngularSupport

# The three-cluster support used throughout: |Omega| = 0.9, M = 3.
THREE_CLUSTERS = "-1:-0.7,-0.15:0.15,0.7:1"


@pytest.fixture(autouse=True)
def clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep a developer's COLORED_SCATTER_SEED out of the tests."""
    monkeypatch.delenv("COLORED_SCATTER_SEED", raising=False)


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def temp_config_file(temp_dir: Path) -> Path:
    """Create a temporary flat config file keyed by flag names."""
    config_path = temp_dir / "config.yaml"
    config_path.write_text(
        """
omega: "-1:-0.7,0.7:1"
gamma: [0.1, 0.2]
snr-db: "0,30"
antennas: "1,3,5"
grid-k: 64
trials: 8
seed: 11
bounce: single
output: "{output}"
""".format(output=str(temp_dir / "out" / "results.csv").replace("\\", "/"))
    )
    return config_path


@pytest.fixture
def three_clusters() -> AngularSupport:
    """The [-1,-0.7] U [-0.15,0.15] U [0.7,1] support."""
    return AngularSupport.parse(THREE_CLUSTERS)


@pytest.fixture
def single_interval() -> AngularSupport:
    """A single interval of length 0.6."""
    return AngularSupport.parse("-0.3:0.3")


@pytest.fixture
def small_run_config(temp_dir: Path) -> RunConfig:
    """A run that finishes in well under a second."""
    return RunConfig(
        omega=THREE_CLUSTERS,
        gamma=[0.1, 0.2],
        snr_db=[0.0, 30.0],
        antennas=[1, 3, 5],
        grid_k=32,
        trials=4,
        seed=7,
        eta_reference=8,
        output=temp_dir / "results.csv",
    )
