import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bridging import PatternSets, data_path, load_demo_kb  # noqa: E402


@pytest.fixture
def kb():
    return load_demo_kb()


@pytest.fixture(scope="session")
def schema():
    return load_demo_kb().schema


@pytest.fixture(scope="session")
def patterns(schema):
    return PatternSets.for_schema(schema)


@pytest.fixture(scope="session")
def demo_path():
    return data_path("demo.kb")


@pytest.fixture(scope="session")
def fragment_path():
    return data_path("fragment.dis")


@pytest.fixture(scope="session")
def genitive_path():
    return data_path("fragment_genitive.dis")
