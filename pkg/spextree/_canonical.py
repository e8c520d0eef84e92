"""
Canonical forms of small graphs and isomorph-free generation.

The canonical form of a graph is the lexicographically least upper-triangle adjacency string over all vertex orders
reachable by equitable refinement and individualization. Branches that differ by a transposition of twin vertices
are pruned since they produce the same strings.
"""
import logging
from functools import lru_cache
from typing import Callable, Iterator

import networkx as nx

from ._data_structures import Graph
from ._errors import ParameterRangeError

CANONICAL_MAX_N = 12  # above this, isomorphism tests go through networkx

Partition = list[list[int]]


def _refine(graph: Graph, partition: Partition) -> Partition:
    while True:
        cell_of = {v: i for i, cell in enumerate(partition) for v in cell}
        refined, changed = [], False
        for cell in partition:
            if len(cell) == 1:
                refined.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                signature = tuple(sorted(cell_of[w] for w in graph.adjacency[v]))
                groups.setdefault(signature, []).append(v)
            changed |= len(groups) > 1
            refined.extend(sorted(groups[s]) for s in sorted(groups))
        if not changed:
            return refined
        partition = refined


def are_twins(graph: Graph, u: int, v: int) -> bool:
    return graph.adjacency[u] - {v} == graph.adjacency[v] - {u}


def _code(graph: Graph, order: list[int]) -> bytes:
    adjacency = graph.adjacency
    return bytes(1 if order[j] in adjacency[order[i]] else 0
                 for i in range(len(order)) for j in range(i + 1, len(order)))


def _search(graph: Graph, partition: Partition, best: list) -> None:
    partition = _refine(graph, partition)
    target = next((i for i, cell in enumerate(partition) if len(cell) > 1), None)
    if target is None:
        order = [cell[0] for cell in partition]
        code = _code(graph, order)
        if best[0] is None or code < best[0]:
            best[0], best[1] = code, order
        return
    cell = partition[target]
    tried: list[int] = []
    for v in cell:
        if any(are_twins(graph, u, v) for u in tried):
            continue
        tried.append(v)
        rest = [u for u in cell if u != v]
        _search(graph, partition[:target] + [[v], rest] + partition[target + 1:], best)


def canonical_labeling(graph: Graph, root: int | None = None) -> list[int]:
    """ Vertex order of the canonical form: position i holds the old vertex placed at label i. With ``root``
    given, that vertex is kept first. """
    if graph.n == 0:
        return []
    if root is None:
        partition = [list(range(graph.n))]
    else:
        partition = [[root], [v for v in range(graph.n) if v != root]] if graph.n > 1 else [[root]]
    best = [None, None]
    _search(graph, partition, best)
    return best[1]


@lru_cache(maxsize=1 << 16)
def canonical_form(graph: Graph, root: int | None = None) -> tuple[int, bytes]:
    order = canonical_labeling(graph, root)
    return graph.n, _code(graph, order)


def canonical_graph(graph: Graph) -> Graph:
    return graph.relabel(canonical_labeling(graph))


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.number_of_edges != h.number_of_edges or sorted(g.degrees) != sorted(h.degrees):
        return False
    if g.n <= CANONICAL_MAX_N:
        return canonical_form(g) == canonical_form(h)
    return nx.is_isomorphic(g.to_networkx(), h.to_networkx())


def dedupe_isomorphic(graphs: list[Graph]) -> list[Graph]:
    """ Keep the first graph of every isomorphism class, preserving order. """
    kept: list[Graph] = []
    for graph in graphs:
        if not any(are_isomorphic(graph, other) for other in kept):
            kept.append(graph)
    return kept


def _augmentations(graph: Graph) -> Iterator[Graph]:
    n = graph.n
    for mask in range(1 << n):
        new_edges = [(v, n) for v in range(n) if mask >> v & 1]
        yield Graph(n + 1, graph.edges | frozenset(new_edges))


def generate_graphs(n: int, keep: Callable[[Graph], bool] | None = None) -> list[Graph]:
    """
    All graphs on ``n`` vertices up to isomorphism, in canonical labeling, ordered by canonical string.

    :param n: Number of vertices.
    :param keep: Optional predicate; must be hereditary (closed under deleting vertices), which holds for
        F-freeness. Graphs failing it are discarded at every order, pruning their extensions.
    :return: One canonical representative per isomorphism class accepted by ``keep``.
    """
    if n < 0:
        raise ParameterRangeError(f"Vertex count must be non-negative, got {n}.")
    level = [Graph(0)]
    if keep is not None and not keep(level[0]):
        return []
    for order in range(1, n + 1):
        seen: dict[tuple[int, bytes], Graph | None] = {}
        for graph in level:
            for candidate in _augmentations(graph):
                form = canonical_form(candidate)
                if form in seen:
                    continue
                accepted = keep is None or keep(candidate)
                seen[form] = canonical_graph(candidate) if accepted else None
        level = [seen[form] for form in sorted(seen) if seen[form] is not None]
        logging.debug(f"generated {len(level)} graphs on {order} vertices")
    return level
