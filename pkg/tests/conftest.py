"""Pytest configuration."""

import sys
from pathlib import Path

import pytest

# Add project root to path so imports work
sys.path.insert(0, str(Path(__file__).parent.parent))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full table or figure reproduction")


@pytest.fixture
def out_dir(tmp_path):
    """Fresh output directory for CSV/SVG artifacts."""
    path = tmp_path / "out"
    path.mkdir()
    return path
