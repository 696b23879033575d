import pytest

from fatsection.correspondence import body_from_entry
from fatsection.registry import load_entry

_BODIES = {}


def body(name):
    if name not in _BODIES:
        _BODIES[name] = body_from_entry(load_entry(name))
    return _BODIES[name]


@pytest.fixture(scope="session")
def sh2():
    return body("schur-horn-2")


@pytest.fixture(scope="session")
def sh3():
    return body("schur-horn-3")


@pytest.fixture(scope="session")
def rot2():
    return body("rot2")


@pytest.fixture(scope="session")
def d8():
    return body("dihedral-8")


@pytest.fixture(scope="session")
def d4():
    return body("dihedral-4")
