"""Shared small-graph zoo used across the test suite."""

import pytest

from percoplane import gallery
from percoplane.graph import normalize

make_square = gallery.square
make_diamond = gallery.diamond
make_theta = gallery.theta
make_domino = gallery.domino
make_grid3 = gallery.grid3
make_pentagon_spoke = gallery.pentagon_spoke

ZOO_BUILDERS = gallery.BUILDERS


@pytest.fixture
def diamond():
    return make_diamond()


@pytest.fixture
def square():
    return make_square()


@pytest.fixture
def normalized_diamond():
    return normalize(make_diamond())


@pytest.fixture(params=sorted(ZOO_BUILDERS))
def zoo_graph(request):
    return ZOO_BUILDERS[request.param]()
