import pytest

from stopcontagion import database
from stopcontagion.contagion import MinContagionInstance, StopContagionInstance
from stopcontagion.graph_core import from_edge_list
from stopcontagion.init_db import init_models
from stopcontagion.random_models import complete_graph, star


@pytest.fixture
def paw():
    """Triangle 0-1-2 with a pendant vertex 3 on 2."""
    return from_edge_list(4, [(0, 1), (0, 2), (1, 2), (2, 3)])


@pytest.fixture
def paw_min(paw):
    return MinContagionInstance.uniform(paw, {0, 1}, r=2, slack=0)


@pytest.fixture
def k4_min():
    return MinContagionInstance.uniform(complete_graph(4), {0, 1}, r=2, slack=0)


@pytest.fixture
def k4_stop():
    return StopContagionInstance.uniform(complete_graph(4), {0, 1}, {3}, r=2)


@pytest.fixture
def star_stop():
    """Centre 0 protected, leaves 1 and 2 seeded."""
    return StopContagionInstance.uniform(star(3), {1, 2}, {0}, r=2)


@pytest.fixture
def store_url(tmp_path):
    url = f"sqlite:///{tmp_path / 'results.db'}"
    database.bind(url)
    init_models()
    yield url
    database.engine.dispose()
