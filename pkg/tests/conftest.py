import json
import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_DIR = REPO_ROOT / "data" / "synthetic_census"

# Make the sibling strategies module importable regardless of rootdir.
sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture(scope="session")
def census_fixture_dir() -> Path:
    assert FIXTURE_DIR.is_dir(), "synthetic census fixture missing; run data/make_synthetic_census.py"
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def census_manifest_path(census_fixture_dir) -> Path:
    return census_fixture_dir / "manifest.json"


@pytest.fixture(scope="session")
def census_config_path(census_fixture_dir) -> Path:
    return census_fixture_dir / "config.json"


@pytest.fixture(scope="session")
def planted(census_fixture_dir) -> dict:
    return json.loads((census_fixture_dir / "planted_counts.json").read_text())
