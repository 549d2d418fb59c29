import pytest

from irvzones.families import build_family
from irvzones.graphs import all_pairs_distances, to_graph6


@pytest.fixture(scope="session")
def path6():
    return build_family("path", 6)


@pytest.fixture(scope="session")
def path6_dm(path6):
    return all_pairs_distances(path6)


@pytest.fixture()
def path6_file(tmp_path, path6):
    p = tmp_path / "path6.g6"
    p.write_text(to_graph6(path6) + "\n")
    return str(p)
