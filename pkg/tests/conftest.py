"""Shared fixtures: hand-built graphs and the seeded benchmark suites."""
import pytest

from mds_qaoa import Graph, InstanceSpec, generate
from mds_qaoa.experiments import instance_seed

SUITE_SEED = 2024
SUITE_SIZES = (4, 6, 8)
SUITE_COUNT = 20


def suite_graphs(family, n, count=SUITE_COUNT, master=SUITE_SEED):
    """The deterministic benchmark instances for one (family, size) cell."""
    return [generate(InstanceSpec(family, n, instance_seed(master, family, n, i)))
            for i in range(count)]


@pytest.fixture(scope="session")
def suite():
    """20 seeded graphs per family and size in {4, 6, 8}."""
    return {(family, n): suite_graphs(family, n)
            for family in ("3reg", "er") for n in SUITE_SIZES}


@pytest.fixture(scope="session")
def k4():
    """Complete graph on four vertices (the unique 3-regular graph there)."""
    return Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture(scope="session")
def cubic6():
    """A 3-regular graph on six vertices: the 6-cycle plus long diagonals."""
    return Graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0),
                     (0, 3), (1, 4), (2, 5)])


@pytest.fixture(scope="session")
def path4():
    return Graph(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture(scope="session")
def star5():
    return Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])


@pytest.fixture(scope="session")
def lonely4():
    """Two-edge path plus an isolated vertex; the isolated one must be chosen."""
    return Graph(4, [(0, 1), (1, 2)])
