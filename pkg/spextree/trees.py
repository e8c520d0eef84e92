"""
Tree parsing, catalog builders and the structural parameters of a tree F: bipartition, q, delta, covering and
matching numbers, diameter, spider legs and the covering family.
"""
import itertools
import logging
import re
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

from ._canonical import canonical_form, canonical_graph
from ._codecs import CODECS, from_graph6
from ._data_structures import Graph, TreeProfile, SpiderProfile, CoveringFamily
from ._errors import (TreeParseError, GraphFormatError, ParameterRangeError, ClassificationDomainError,
                      ClassificationConsistencyError)
from .graphs import complete_graph

_CATALOG_ENTRY = re.compile(r"^([a-z][a-z-]*)\(\s*([\d,\s]*)\)$")

NAMED_SPIDERS = ((2, 2, 1), (2, 2), (2, 2, 2), (4, 2), (5, 1, 1), (5, 3, 1), (7, 1),
                 (3, 3, 1), (3, 3), (3, 1), (3, 3, 3), (3, 3, 1, 1), (3, 1, 1), (3, 1, 1, 1))


def validate_tree(graph: Graph) -> Graph:
    if graph.n < 1:
        raise TreeParseError("A tree needs at least one vertex.")
    if graph.number_of_edges >= graph.n:
        raise TreeParseError(f"Cycle detected: {graph.number_of_edges} edges on {graph.n} vertices.")
    if not graph.is_connected:
        raise TreeParseError(f"Graph is disconnected ({len(graph.components())} components).")
    return graph


def path_tree(l: int) -> Graph:
    if l < 1:
        raise ParameterRangeError(f"Path order must be positive, got {l}.")
    return Graph.from_edges(l, ((i, i + 1) for i in range(l - 1)))


def star_tree(l: int) -> Graph:
    """ K_{1,l-1}, centred at vertex 0. """
    if l < 2:
        raise ParameterRangeError(f"Star order must be at least 2, got {l}.")
    return Graph.from_edges(l, ((0, i) for i in range(1, l)))


def spider_tree(*legs: int) -> Graph:
    """ Spider with centre 0 and the given leg lengths. """
    if not legs or any(leg < 1 for leg in legs):
        raise ParameterRangeError(f"Spider legs must be positive, got {legs}.")
    edges, next_vertex = [], 1
    for leg in legs:
        previous = 0
        for _ in range(leg):
            edges.append((previous, next_vertex))
            previous, next_vertex = next_vertex, next_vertex + 1
    return Graph.from_edges(next_vertex, edges)


def doublestar_tree(a: int, b: int) -> Graph:
    """ Double star: adjacent centres 0 and 1 carrying ``a`` and ``b`` leaves, a + b + 2 vertices. """
    if a < 0 or b < 0:
        raise ParameterRangeError(f"Leaf counts must be non-negative, got a={a}, b={b}.")
    edges = [(0, 1)] + [(0, 2 + i) for i in range(a)] + [(1, 2 + a + i) for i in range(b)]
    return Graph.from_edges(a + b + 2, edges)


def broom_tree(l: int, k: int) -> Graph:
    """ Path on l - k vertices with k leaves hung on its last vertex. """
    if k < 1 or l - k < 2:
        raise ParameterRangeError(f"Broom needs k >= 1 and a handle of at least 2 vertices, got l={l}, k={k}.")
    handle = l - k
    edges = [(i, i + 1) for i in range(handle - 1)] + [(handle - 1, handle + i) for i in range(k)]
    return Graph.from_edges(l, edges)


def diameter_spider(l: int, d: int) -> Graph:
    """
    Spider of order l and diameter d: write l - d - 1 = 2*alpha + gamma with gamma in {0, 1} and take
    (a, b, c) = (alpha + gamma + 2, alpha + 1, d - 2); the spider has a - b - 1 legs of length 1, b legs of
    length 2 and one leg of length c.

    :param l: Tree order, at least 6.
    :param d: Diameter, 4 <= d <= l - 1.
    :raises ParameterRangeError: If l or d is out of range.
    """
    if l < 6:
        raise ParameterRangeError(f"Order l={l} must be at least 6.")
    if not 4 <= d <= l - 1:
        raise ParameterRangeError(f"Diameter d={d} must satisfy 4 <= d <= l-1 = {l - 1}.")
    alpha, gamma = divmod(l - d - 1, 2)
    a, b, c = alpha + gamma + 2, alpha + 1, d - 2
    return spider_tree(c, *([2] * b), *([1] * (a - b - 1)))


def _catalog_tree(name: str, args: list[int]) -> Graph:
    match name, args:
        case "path", [l]:
            return path_tree(l)
        case "star", [l]:
            return star_tree(l)
        case "spider", [*legs] if legs:
            return spider_tree(*legs)
        case "doublestar", [a, b]:
            return doublestar_tree(a, b)
        case "broom", [l, k]:
            return broom_tree(l, k)
        case "diameter-spider", [l, d]:
            return diameter_spider(l, d)
    raise TreeParseError(f"Unknown catalog entry {name}({', '.join(map(str, args))}).")


def parse_tree(source: str, format: Literal["edge-list", "catalog"] = "catalog") -> Graph:
    """
    Parse a tree from edge-list text or a catalog name such as ``path(5)``, ``star(6)``, ``spider(3,3,1)``,
    ``doublestar(1,2)``, ``broom(7,3)``, ``diameter-spider(8,5)`` or ``graph6:<code>``.

    :param source: The text to parse.
    :param format: ``"edge-list"`` or ``"catalog"``.
    :return: A validated tree.
    :raises TreeParseError: On malformed input, cycles or disconnected graphs.
    """
    match format:
        case "edge-list":
            try:
                graph = CODECS["edge-list"].decode(source)
            except GraphFormatError as e:
                raise TreeParseError(str(e).removeprefix(f"line {e.line}: "), line=e.line) from e
        case "catalog":
            text = source.strip().replace(" ", "")
            if text.startswith("graph6:"):
                try:
                    graph = from_graph6(text.removeprefix("graph6:"))
                except GraphFormatError as e:
                    raise TreeParseError(str(e)) from e
            else:
                entry = _CATALOG_ENTRY.match(text)
                if entry is None:
                    raise TreeParseError(f"Cannot parse tree name {source!r}.")
                args = [int(x) for x in entry.group(2).split(",") if x]
                try:
                    graph = _catalog_tree(entry.group(1), args)
                except ParameterRangeError as e:
                    raise TreeParseError(f"{source}: {e}") from e
        case _:
            raise TreeParseError(f"Unknown tree format {format!r}.")
    return validate_tree(graph)


def load_tree(source: str) -> Graph:
    """ Read an edge-list file when ``source`` names one, otherwise parse it as a catalog name. """
    path = Path(source)
    if path.is_file():
        return parse_tree(path.read_text(), format="edge-list")
    return parse_tree(source, format="catalog")


def bipartition(tree: Graph) -> list[int]:
    """ Breadth-first 2-colouring starting from vertex 0. """
    color = [-1] * tree.n
    for start in range(tree.n):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in tree.adjacency[u]:
                if color[w] == -1:
                    color[w] = 1 - color[u]
                    queue.append(w)
    return color


def _postorder(tree: Graph, root: int = 0) -> tuple[list[int], list[int]]:
    parent, order, stack = [-1] * tree.n, [], [root]
    parent[root] = root
    while stack:
        u = stack.pop()
        order.append(u)
        for w in tree.adjacency[u]:
            if parent[w] == -1:
                parent[w] = u
                stack.append(w)
    return order[::-1], parent


def min_vertex_cover_size(tree: Graph) -> int:
    """ Covering number of a tree by dynamic programming over a rooted postorder. """
    if tree.n == 0:
        return 0
    order, parent = _postorder(tree)
    taken, skipped = [1] * tree.n, [0] * tree.n
    for v in order:
        if parent[v] != v:
            p = parent[v]
            taken[p] += min(taken[v], skipped[v])
            skipped[p] += taken[v]
    return min(taken[order[-1]], skipped[order[-1]])


def maximum_matching(graph: Graph, color: list[int] | None = None) -> dict[int, int]:
    """ Maximum matching of a bipartite graph by augmenting paths from the colour-0 side; returns the partner of
    every matched colour-0 vertex. """
    color = bipartition(graph) if color is None else color
    partner: dict[int, int] = {}  # colour-1 vertex -> colour-0 vertex

    def augment(u: int, visited: set[int]) -> bool:
        for w in sorted(graph.adjacency[u]):
            if w in visited:
                continue
            visited.add(w)
            if w not in partner or augment(partner[w], visited):
                partner[w] = u
                return True
        return False

    for u in range(graph.n):
        if color[u] == 0:
            augment(u, set())
    return {u: w for w, u in partner.items()}


def is_covering(graph: Graph, vertices) -> bool:
    chosen = set(vertices)
    return all(u in chosen or v in chosen for u, v in graph.edges)


def _eccentric(tree: Graph, start: int) -> tuple[int, int]:
    distance = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in tree.adjacency[u]:
            if w not in distance:
                distance[w] = distance[u] + 1
                queue.append(w)
    far = max(distance, key=lambda v: (distance[v], -v))
    return far, distance[far]


def diameter(tree: Graph) -> int:
    if tree.n <= 1:
        return 0
    far, _ = _eccentric(tree, 0)
    return _eccentric(tree, far)[1]


def path_centers(tree: Graph) -> list[int]:
    """ Every legal centre of a path (its degree-2 vertices); empty for other trees. """
    if tree.n < 3 or tree.max_degree > 2:
        return []
    return [v for v in range(tree.n) if tree.degree(v) == 2]


def _path_order(tree: Graph) -> list[int]:
    start = min(v for v in range(tree.n) if tree.degree(v) <= 1)
    order, previous = [start], None
    while len(order) < tree.n:
        current = order[-1]
        following = next(w for w in tree.adjacency[current] if w != previous)
        previous = current
        order.append(following)
    return order


def spider_profile(tree: Graph, center: int | None = None) -> SpiderProfile | None:
    """
    Leg profile of a spider, a tree with at most one vertex of degree at least 3.

    :param tree: The tree.
    :param center: Centre to use. Defaults to the branch vertex, or for a path to the vertex at position l // 2
        along it.
    :return: The profile, or ``None`` when two or more vertices have degree at least 3.
    :raises ParameterRangeError: If ``center`` is not a legal centre.
    """
    branches = [v for v in range(tree.n) if tree.degree(v) >= 3]
    if len(branches) >= 2:
        return None
    if center is None:
        center = branches[0] if branches else _path_order(tree)[tree.n // 2]
    elif branches and center != branches[0] or not branches and tree.n >= 3 and center not in path_centers(tree):
        raise ParameterRangeError(f"Vertex {center} is not a legal spider centre.")
    legs = []
    for first in tree.adjacency[center]:
        length, previous, current = 1, center, first
        while tree.degree(current) == 2:
            previous, current = current, next(w for w in tree.adjacency[current] if w != previous)
            length += 1
        legs.append(length)
    return SpiderProfile.from_legs(center, legs)


def profile(tree: Graph) -> TreeProfile:
    """
    All structural parameters of a tree.

    The smaller colour class is A. When both classes have the same size, delta is taken as the minimum over both
    orientations, A is the class attaining it, and ``ambiguous_orientation`` is set.

    :param tree: A tree on at least two vertices.
    :return: The profile.
    """
    validate_tree(tree)
    if tree.n < 2:
        raise ParameterRangeError("Profiles need a tree with at least two vertices.")
    color = bipartition(tree)
    sides = [tuple(v for v in range(tree.n) if color[v] == c) for c in (0, 1)]
    ambiguous = len(sides[0]) == len(sides[1])
    if ambiguous:
        side_a, side_b = sorted(sides, key=lambda side: min(tree.degree(v) for v in side))
    else:
        side_a, side_b = sorted(sides, key=len)
    beta = min_vertex_cover_size(tree)
    nu = len(maximum_matching(tree, color))
    if beta != nu:
        raise ClassificationConsistencyError(f"Covering number {beta} differs from matching number {nu}.")
    return TreeProfile(l=tree.n, side_a=side_a, side_b=side_b, q=len(side_a) - 1,
                       delta=min(tree.degree(v) for v in side_a), beta=beta, nu=nu, diameter=diameter(tree),
                       spider=spider_profile(tree), ambiguous_orientation=ambiguous)


def _colex_subsets(n: int, size: int):
    return sorted(itertools.combinations(range(n), size), key=lambda subset: subset[::-1])


def covering_family(tree: Graph, tree_profile: TreeProfile | None = None) -> CoveringFamily:
    """
    The covering family of F: the graphs F[S] over coverings S with |S| <= q, up to isomorphism, or {K_{q+1}}
    when the covering number is q + 1.

    :param tree: The tree F.
    :param tree_profile: Its profile, recomputed when omitted.
    :return: The family with one witness covering per pattern.
    :raises ClassificationDomainError: For stars (q = 0).
    """
    tree_profile = tree_profile or profile(tree)
    q = tree_profile.q
    if q == 0:
        raise ClassificationDomainError("Stars (q = 0) have no covering family.")
    if tree_profile.beta == q + 1:
        return CoveringFamily(q, (complete_graph(q + 1),), ((),), complete=True)
    patterns, coverings, forms = [], [], set()
    for size in range(tree_profile.beta, q + 1):
        for subset in _colex_subsets(tree.n, size):
            if not is_covering(tree, subset):
                continue
            pattern = tree.induced_subgraph(subset)
            form = canonical_form(pattern)
            if form not in forms:
                forms.add(form)
                patterns.append(pattern)
                coverings.append(subset)
    logging.debug(f"covering family of order {q}: {len(patterns)} patterns")
    return CoveringFamily(q, tuple(patterns), tuple(coverings))


def generate_trees(l: int) -> list[Graph]:
    """ All trees on ``l`` vertices up to isomorphism, grown by leaf addition. """
    if l < 1:
        raise ParameterRangeError(f"Tree order must be positive, got {l}.")
    level = {canonical_form(Graph(1)): Graph(1)}
    for order in range(2, l + 1):
        grown = {}
        for tree in level.values():
            for v in range(tree.n):
                child = Graph(order, tree.edges | {(v, order - 1)})
                form = canonical_form(child)
                if form not in grown:
                    grown[form] = canonical_graph(child)
        level = grown
    return [level[form] for form in sorted(level)]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    tree: Graph


def named_trees(max_order: int = 9) -> list[CatalogEntry]:
    entries = [CatalogEntry(f"path({l})", path_tree(l)) for l in range(4, max_order + 1)]
    entries += [CatalogEntry(f"star({l})", star_tree(l)) for l in range(4, max_order + 1)]
    entries += [CatalogEntry(f"doublestar({a},{b})", doublestar_tree(a, b))
                for a in range(1, max_order) for b in range(a, max_order) if a + b + 2 <= max_order]
    entries += [CatalogEntry(f"broom({l},{k})", broom_tree(l, k))
                for l in range(5, max_order + 1) for k in range(2, l - 2)]
    entries += [CatalogEntry(f"spider({','.join(map(str, legs))})", spider_tree(*legs)) for legs in NAMED_SPIDERS
                if sum(legs) + 1 <= max_order]
    return entries


def catalog_trees(max_order: int = 9) -> list[CatalogEntry]:
    """ Named trees followed by every other tree of order 4..max_order, the latter named by their graph6 code. """
    entries = named_trees(max_order)
    known = {canonical_form(entry.tree) for entry in entries}
    for l in range(4, max_order + 1):
        for tree in generate_trees(l):
            form = canonical_form(tree)
            if form not in known:
                known.add(form)
                entries.append(CatalogEntry(f"graph6:{CODECS['graph6'].encode(tree)}", tree))
    return entries
