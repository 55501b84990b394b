import pathlib
import sys

import pytest

TESTS_DIR = pathlib.Path(__file__).resolve().parent
if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))

FIXTURES = TESTS_DIR / "fixtures"


@pytest.fixture(scope="session")
def catalog():
    from fgkit.catalog import load_catalog
    return load_catalog()


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
