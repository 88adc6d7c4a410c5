import json
import pathlib

import pytest

TABLES_DIR = pathlib.Path(__file__).resolve().parent.parent / "tables"


@pytest.fixture(scope="session")
def table6_rows():
    return json.loads((TABLES_DIR / "table6.json").read_text())


@pytest.fixture(scope="session")
def table7_rows():
    return json.loads((TABLES_DIR / "table7.json").read_text())
