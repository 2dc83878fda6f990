"""
Shared fixtures for the steinpp test suite.
"""

import json
from pathlib import Path

import pytest

from steinpp.core.config.settings import SteinppSettings
from steinpp.core.streams import SeededStream

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def stream():
    """Fixed-seed random stream."""
    return SeededStream(20240607)


@pytest.fixture
def settings():
    """Single-threaded settings with a small chunk size."""
    return SteinppSettings(threads=1, chunk_size=4096, log_level="WARNING")


@pytest.fixture
def config_dir():
    return CONFIG_DIR


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON document under tmp_path and return its path."""
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path
    return write
