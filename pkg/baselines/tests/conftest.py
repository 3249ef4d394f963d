import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def load_fixture():
    def load(name: str):
        with open(FIXTURES / name, "r", encoding="utf-8") as fh:
            return json.load(fh)

    return load
