import pytest

from khoszul.catalog import KnownInvariantEntry, alternates, catalog_ids, get_link, known_khi
from khoszul.link import DiagramError


def test_ids():
    ids = catalog_ids()
    for lid in ("unknot", "hopf", "trefoil-right", "trefoil-left", "figure-eight", "unlink:4"):
        assert lid in ids


def test_components():
    assert get_link("unknot").m == 1
    assert get_link("unlink:3").m == 3
    assert get_link("hopf").m == 2
    assert get_link("trefoil").signs == (1, 1, 1)
    assert get_link("trefoil-left").signs == (-1, -1, -1)


def test_khi_values():
    assert known_khi("unknot").khi_dim == 1
    assert [known_khi(f"unlink:{m}").khi_dim for m in range(1, 5)] == [1, 2, 4, 8]
    assert known_khi("hopf").khi_dim == 4
    for lid in ("trefoil", "trefoil-left", "figure-eight"):
        assert known_khi(lid) is None


def test_entry_validation():
    with pytest.raises(ValueError):
        KnownInvariantEntry("x", 1, 0, "")


def test_bad_ids():
    for bad in ("unlink:0", "unlink:9", "unlink:x", "torus"):
        with pytest.raises(DiagramError):
            get_link(bad)


def test_alternates_same_components():
    for lid in ("unknot", "hopf", "trefoil-right", "trefoil-left", "figure-eight"):
        for d in alternates(lid):
            assert d.m == get_link(lid).m
