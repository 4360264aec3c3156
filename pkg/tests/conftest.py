import pytest

from toricfrob import atlas


@pytest.fixture(scope="session")
def fano3_entries():
    enum = atlas.enumerate_fano3()
    assert len(enum.entries) == 18
    return enum.entries


@pytest.fixture(scope="session")
def fano3_enum():
    return atlas.enumerate_fano3()


@pytest.fixture(scope="session")
def all_atlas_entries():
    return [atlas.get(i) for i in atlas.list_ids()]
