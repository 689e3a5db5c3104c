from pathlib import Path

import pytest

from routerisk import builtin_presets

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def presets():
    return builtin_presets()
