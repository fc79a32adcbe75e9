import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import geoweave as gw

FIXTURES = Path(__file__).parent.parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def square9():
    return gw.build_board(gw.Square(9, 9))


@pytest.fixture(scope="session")
def hex7_rules():
    return gw.hex_rules(7)


@pytest.fixture(scope="session")
def line4_7_rules():
    return gw.line4_rules(7, 7)


@pytest.fixture(scope="session")
def semi3():
    return gw.build_board(gw.Semi3464(3))


@pytest.fixture(scope="session")
def bridge_fs():
    return gw.load_feature_set(FIXTURES / "bridge.fs")


@pytest.fixture(scope="session")
def line4_fs():
    return gw.load_feature_set(FIXTURES / "line4.fs")


@pytest.fixture(scope="session")
def group3_fs():
    return gw.load_feature_set(FIXTURES / "group3.fs")


@pytest.fixture(scope="session")
def thin_group_fs():
    return gw.load_feature_set(FIXTURES / "thin_group.fs")
