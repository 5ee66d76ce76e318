import pytest

from jetbound.geometry import LatticeMap, LatticePointSet, hull_to_halfspaces
from jetbound.methods import Decomposition

THIRTEEN = [(0, 0)] + [(i, 1) for i in range(4)] + [(i, 2) for i in range(6)] + [(0, 3), (1, 3)]
N0_GENERATORS = [(6, 0), (4, 1), (2, 2), (1, 3), (0, 4)]
TETRA = [(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
TETRA_MAP = ((1, 1, 0), (1, 0, 1), (0, 1, 1))
TRIANGLE = [(0, 0), (2, 1), (1, 2)]
FAN = [[(1, 1), (2, 1), (1, 2)], [(0, 0), (1, 1), (1, 2)], [(0, 0), (2, 1), (1, 1)]]

PIN = {1: (0, 0), 2: (6, 0), 3: (0, 6), 4: (1, 1), 5: (4, 1), 6: (1, 4)}
PIN_CELLS = [(1, 2, 4), (2, 4, 5), (2, 3, 5), (3, 5, 6), (1, 3, 6), (1, 4, 6), (4, 5, 6)]


@pytest.fixture
def thirteen():
    return LatticePointSet.of(THIRTEEN)


@pytest.fixture
def triangle():
    return hull_to_halfspaces(TRIANGLE)


@pytest.fixture
def tetrahedron():
    return hull_to_halfspaces(TETRA)


@pytest.fixture
def tetra_map():
    return LatticeMap(TETRA_MAP)


@pytest.fixture
def fan(triangle):
    return Decomposition(triangle, tuple(hull_to_halfspaces(c) for c in FAN))


@pytest.fixture
def pinwheel():
    parent = hull_to_halfspaces([PIN[1], PIN[2], PIN[3]])
    return Decomposition(parent, tuple(hull_to_halfspaces([PIN[i] for i in c]) for c in PIN_CELLS))
