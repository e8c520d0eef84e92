"""
Subgraph embedding search: does a pattern graph occur (not necessarily induced) in a host graph?

Hosts that are joins are split into their co-components: a pattern embeds in G1 ∇ G2 exactly when its vertex set
splits into parts embedding into G1 and G2, since every cross edge is present. Dominating host vertices form one
clique part that accepts any pattern subset up to its size. Co-connected parts are searched by backtracking.
"""
from collections import Counter

from ._canonical import are_twins, are_isomorphic, canonical_form
from ._data_structures import Graph, EmbeddingWitness, EmbeddingStatus, CoveringFamily
from ._errors import InconclusiveSearchError

COMPONENT_KEY_MAX = 7  # host components up to this order get a rooted canonical key for symmetry pruning


class _NodeCounter:

    def __init__(self, budget: int | None):
        self.budget = budget
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise InconclusiveSearchError(self.nodes)


def _fits(host: Graph, pattern: Graph) -> bool:
    if pattern.n > host.n or pattern.number_of_edges > host.number_of_edges:
        return False
    host_degrees = sorted(host.degrees, reverse=True)
    return all(d <= h for d, h in zip(sorted(pattern.degrees, reverse=True), host_degrees))


class _Backtracker:
    """ Backtracking embedding of a pattern without isolated vertices into a host. """

    def __init__(self, host: Graph, pattern: Graph, counter: _NodeCounter):
        self.host, self.pattern, self.counter = host, pattern, counter
        self.order, self.parent, self.component_size = [], {}, {}
        for component in sorted(pattern.components(), key=len, reverse=True):
            root = max(component, key=lambda v: (pattern.degree(v), -v))
            self.component_size[root] = len(component)
            queue = [root]
            seen = {root}
            while queue:
                u = queue.pop(0)
                self.order.append(u)
                for w in sorted(pattern.adjacency[u], key=lambda x: (-pattern.degree(x), x)):
                    if w not in seen:
                        seen.add(w)
                        self.parent[w] = u
                        queue.append(w)
        self.host_components = host.components()
        self.host_component_of = {v: i for i, c in enumerate(self.host_components) for v in c}
        by_degree = lambda h: (-host.degree(h), h)
        self.host_order = sorted(range(host.n), key=by_degree)
        self.sorted_neighbors = [sorted(host.adjacency[h], key=by_degree) for h in range(host.n)]
        self.component_keys: dict[int, tuple] = {}
        self.mapping: dict[int, int] = {}
        self.used: set[int] = set()
        self.used_in_component: Counter = Counter()

    def _component_key(self, h: int) -> tuple | None:
        if h not in self.component_keys:
            component = self.host_components[self.host_component_of[h]]
            key = None
            if len(component) <= COMPONENT_KEY_MAX:
                sub = self.host.induced_subgraph(component)
                key = ("component", canonical_form(sub, component.index(h)))
            self.component_keys[h] = key
        return self.component_keys[h]

    def run(self) -> dict[int, int] | None:
        return dict(self.mapping) if self._extend(0) else None

    def _extend(self, index: int) -> bool:
        if index == len(self.order):
            return True
        v = self.order[index]
        is_root = v not in self.parent
        pool = self.host_order if is_root else self.sorted_neighbors[self.mapping[self.parent[v]]]
        tried: list[int] = []
        root_keys: set[tuple] = set()
        for h in pool:
            if h in self.used or self.host.degree(h) < self.pattern.degree(v):
                continue
            if any(w in self.mapping and self.mapping[w] not in self.host.adjacency[h]
                   for w in self.pattern.adjacency[v]):
                continue
            component = self.host_component_of[h]
            if is_root:
                free = len(self.host_components[component]) - self.used_in_component[component]
                if free < self.component_size[v]:
                    continue
            if any(are_twins(self.host, h, t) for t in tried):
                continue
            if is_root and self.used_in_component[component] == 0:
                key = self._component_key(h)
                if key is not None:
                    if key in root_keys:
                        continue
                    root_keys.add(key)
            tried.append(h)
            self.counter.tick()
            self.mapping[v] = h
            self.used.add(h)
            self.used_in_component[component] += 1
            if self._extend(index + 1):
                return True
            del self.mapping[v]
            self.used.discard(h)
            self.used_in_component[component] -= 1
        return False


class _JoinSplitter:
    """ Distributes pattern vertices over the co-components of a join host. """

    def __init__(self, host: Graph, pattern: Graph, co_components: list[list[int]], counter: _NodeCounter):
        self.host, self.pattern, self.counter = host, pattern, counter
        self.dominating = sorted(c[0] for c in co_components if len(c) == 1)
        self.parts = [c for c in co_components if len(c) > 1]
        self.graphs = [host.induced_subgraph(c) for c in self.parts]
        self.part_class = []
        for i, graph in enumerate(self.graphs):
            earlier = next((j for j in range(i) if self.part_class[j] == j and are_isomorphic(self.graphs[j], graph)),
                           i)
            self.part_class.append(earlier)
        self.order = sorted(range(pattern.n), key=lambda v: (-pattern.degree(v), v))
        self.members: list[list[int]] = [[] for _ in self.parts]
        self.clique_members: list[int] = []
        self.internal_degree: list[Counter] = [Counter() for _ in self.parts]
        self.internal_edges = [0] * len(self.parts)
        self.memo: dict[tuple[int, frozenset], dict[int, int] | None] = {}
        self.result: dict[int, int] | None = None

    def run(self) -> dict[int, int] | None:
        return self.result if self._assign(0) else None

    def _can_join(self, i: int, v: int) -> int | None:
        graph, members = self.graphs[i], self.members[i]
        if len(members) + 1 > graph.n:
            return None
        member_set = set(members)
        inside = [w for w in self.pattern.adjacency[v] if w in member_set]
        if len(inside) > graph.max_degree or self.internal_edges[i] + len(inside) > graph.number_of_edges:
            return None
        if any(self.internal_degree[i][w] + 1 > graph.max_degree for w in inside):
            return None
        if not members and any(self.part_class[j] == self.part_class[i] and not self.members[j] for j in range(i)):
            return None
        return len(inside)

    def _assign(self, index: int) -> bool:
        if index == len(self.order):
            return self._complete()
        v = self.order[index]
        if len(self.clique_members) < len(self.dominating):
            self.counter.tick()
            self.clique_members.append(v)
            if self._assign(index + 1):
                return True
            self.clique_members.pop()
        for i in range(len(self.parts)):
            added = self._can_join(i, v)
            if added is None:
                continue
            self.counter.tick()
            inside = [w for w in self.pattern.adjacency[v] if w in self.members[i]]
            self.members[i].append(v)
            self.internal_edges[i] += added
            self.internal_degree[i][v] = added
            for w in inside:
                self.internal_degree[i][w] += 1
            if self._assign(index + 1):
                return True
            self.members[i].pop()
            self.internal_edges[i] -= added
            del self.internal_degree[i][v]
            for w in inside:
                self.internal_degree[i][w] -= 1
        return False

    def _complete(self) -> bool:
        mapping = dict(zip(self.clique_members, self.dominating))
        for i, members in enumerate(self.members):
            if not members:
                continue
            key = (i, frozenset(members))
            if key not in self.memo:
                self.memo[key] = _embed(self.graphs[i], self.pattern.induced_subgraph(members), self.counter)
            sub_mapping = self.memo[key]
            if sub_mapping is None:
                return False
            ordered = sorted(members)
            mapping.update({ordered[a]: self.parts[i][b] for a, b in sub_mapping.items()})
        self.result = mapping
        return True


def _embed(host: Graph, pattern: Graph, counter: _NodeCounter) -> dict[int, int] | None:
    if not _fits(host, pattern):
        return None
    core = [v for v in range(pattern.n) if pattern.degree(v) > 0]
    mapping: dict[int, int] = {}
    if core:
        core_pattern = pattern.induced_subgraph(core)
        co_components = host.co_components()
        if len(co_components) > 1:
            core_mapping = _JoinSplitter(host, core_pattern, co_components, counter).run()
        else:
            core_mapping = _Backtracker(host, core_pattern, counter).run()
        if core_mapping is None:
            return None
        mapping = {core[a]: b for a, b in core_mapping.items()}
    taken = set(mapping.values())
    spare = (h for h in range(host.n) if h not in taken)
    for v in range(pattern.n):
        if v not in mapping:
            mapping[v] = next(spare)
    return mapping


def find_embedding(host: Graph, pattern: Graph, budget: int | None = None) -> EmbeddingWitness:
    """
    Search for an injective map of the pattern's vertices into the host preserving every pattern edge.

    :param host: The host graph.
    :param pattern: The pattern graph; isolated vertices go to any spare host vertices.
    :param budget: Optional cap on search nodes. When reached the status is inconclusive.
    :return: A witness with status found (and the mapping), absent, or inconclusive.
    """
    counter = _NodeCounter(budget)
    try:
        mapping = _embed(host, pattern, counter)
    except InconclusiveSearchError as e:
        return EmbeddingWitness(EmbeddingStatus.INCONCLUSIVE, None, e.nodes)
    if mapping is None:
        return EmbeddingWitness(EmbeddingStatus.ABSENT, None, counter.nodes)
    return EmbeddingWitness(EmbeddingStatus.FOUND, mapping, counter.nodes)


def is_valid_embedding(host: Graph, pattern: Graph, mapping: dict[int, int]) -> bool:
    return (len(mapping) == pattern.n and len(set(mapping.values())) == pattern.n
            and all(host.has_edge(mapping[u], mapping[v]) for u, v in pattern.edges))


def is_free(host: Graph, pattern: Graph, budget: int | None = None) -> bool:
    """ True iff the pattern does not embed; an exhausted budget raises instead of guessing. """
    witness = find_embedding(host, pattern, budget)
    if witness.status is EmbeddingStatus.INCONCLUSIVE:
        raise InconclusiveSearchError(witness.nodes)
    return not witness.found


def is_family_free(host: Graph, family: CoveringFamily, budget: int | None = None) -> bool:
    """
    True iff no pattern of the family embeds in the host.

    :param host: The host graph.
    :param family: The forbidden patterns.
    :param budget: Optional node cap per pattern search.
    :raises InconclusiveSearchError: If a search runs out of budget.
    """
    return all(is_free(host, pattern, budget) for pattern in family.patterns)
