import json

import numpy as np
import pytest

from fatsection.registry import (
    REGISTRY_DIR,
    RegistryError,
    build_entries,
    entry_from_dict,
    entry_names,
    load_entry,
    schur_horn_coordinates,
)


def test_names():
    assert entry_names(include_disabled=False) == [
        "dihedral-4", "dihedral-8", "rot2", "schur-horn-2", "schur-horn-3", "schur-horn-4"]
    assert "copolarity-candidate" in entry_names()


def test_shipped_files_match_builders():
    for name, spec in build_entries().items():
        with open(REGISTRY_DIR / f"{name}.json") as fh:
            assert json.load(fh) == json.loads(json.dumps(spec))


@pytest.mark.parametrize("name", ["rot2", "dihedral-4", "dihedral-8", "schur-horn-2", "schur-horn-3"])
def test_enabled_entries_validate(name):
    e = load_entry(name)
    assert e.report.passed and e.report.k == e.expected["k"]


def test_disabled_entry_is_refused():
    with pytest.raises(RegistryError):
        load_entry("copolarity-candidate")


def test_unknown_and_malformed():
    with pytest.raises(RegistryError):
        load_entry("no-such-entry")
    with pytest.raises(RegistryError):
        entry_from_dict({"name": "x", "group": {"dim": 2, "kind": "lie"}, "section": {}})


def test_every_expected_value_has_provenance():
    for spec in build_entries().values():
        for key in spec["provenance"]:
            assert key in spec["expected"]


def test_schur_horn_coordinates_are_an_isometry():
    m = np.array([[1.0, 2.0, 0.5], [2.0, -3.0, 1.0], [0.5, 1.0, 2.0]])
    x = schur_horn_coordinates(m)
    assert x.shape == (5,) and np.isclose(x @ x, np.sum(m * m))
