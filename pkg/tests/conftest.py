import configparser
import itertools
import random

import networkx as nx
import numpy as np
import pytest

from spextree import Graph
from spextree.trees import parse_tree, is_covering

config = configparser.ConfigParser()
config.read("config.ini")
FULL_SCALE = config.getboolean("general", "full_scale", fallback=True)


def scaled(reduced, full):
    """ The published sweep size, or the reduced one when config.ini sets ``full_scale = no``. """
    return full if FULL_SCALE else reduced


def tree(name: str) -> Graph:
    return parse_tree(name)


def min_cover_brute(graph: Graph) -> int:
    for size in range(graph.n + 1):
        if any(is_covering(graph, subset) for subset in itertools.combinations(range(graph.n), size)):
            return size
    return graph.n


def dense_rho(graph: Graph) -> float:
    if graph.n == 0:
        return 0.0
    return float(np.linalg.eigvalsh(graph.adjacency_matrix()).max())


def random_tree(rng: random.Random, l: int) -> Graph:
    if l == 1:
        return Graph(1)
    if l == 2:
        return Graph.from_edges(2, [(0, 1)])
    sequence = [rng.randrange(l) for _ in range(l - 2)]
    return Graph.from_networkx(nx.from_prufer_sequence(sequence))


def random_graph(rng: random.Random, n: int, density: float = 0.5) -> Graph:
    return Graph.from_edges(n, [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < density])


def random_connected_graph(rng: random.Random, n: int, density: float = 0.3) -> Graph:
    spanning = random_tree(rng, n)
    extra = random_graph(rng, n, density)
    return Graph(n, spanning.edges | extra.edges)


def brute_embeds(host: Graph, pattern: Graph) -> bool:
    if pattern.n > host.n:
        return False
    for image in itertools.permutations(range(host.n), pattern.n):
        if all(host.has_edge(image[u], image[v]) for u, v in pattern.edges):
            return True
    return False


@pytest.fixture
def rng():
    return random.Random(20240117)


@pytest.fixture(params=["spider(2,2,1)", "spider(2,2)", "spider(5,1,1)", "spider(3,3,1)", "spider(3,3,1,1)",
                        "spider(4,2)", "spider(3,3)", "spider(3,1,1)"])
def case_spider(request):
    return request.param, tree(request.param)
