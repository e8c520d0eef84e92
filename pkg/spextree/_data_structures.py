import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Iterable, Any

import networkx as nx
import numpy as np

from ._errors import ParameterRangeError

SCHEMA = "spextree/1"


@dataclass(frozen=True)
class Graph:
    """ Undirected simple graph on the vertices 0..n-1. Edges are stored as ordered pairs (u, v) with u < v. """
    n: int
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        if self.n < 0:
            raise ParameterRangeError(f"Vertex count must be non-negative, got {self.n}.")
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise ParameterRangeError(f"Loop at vertex {u} is not allowed.")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ParameterRangeError(f"Edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}.")
            normalized.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, frozenset(edges))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        index = {node: i for i, node in enumerate(sorted(graph.nodes))}
        return cls(len(index), frozenset((index[u], index[v]) for u, v in graph.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.number_of_edges})"

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        neighbors = [set() for _ in range(self.n)]
        for u, v in self.edges:
            neighbors[u].add(v)
            neighbors[v].add(u)
        return tuple(frozenset(s) for s in neighbors)

    @property
    def number_of_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.adjacency)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def components(self, vertices: Iterable[int] | None = None) -> list[list[int]]:
        """ Connected components of the subgraph induced by ``vertices`` (all vertices by default), each sorted,
        ordered by their smallest vertex. """
        remaining = set(range(self.n)) if vertices is None else set(vertices)
        components = []
        for start in sorted(remaining):
            if start not in remaining:
                continue
            remaining.discard(start)
            component, stack = [start], [start]
            while stack:
                u = stack.pop()
                for w in self.adjacency[u]:
                    if w in remaining:
                        remaining.discard(w)
                        component.append(w)
                        stack.append(w)
            components.append(sorted(component))
        return components

    def co_components(self, vertices: Iterable[int] | None = None) -> list[list[int]]:
        """ Connected components of the complement of the subgraph induced by ``vertices``.

        A graph is a join of its co-components, so more than one co-component means the induced subgraph
        splits as G1 ∇ G2.
        """
        unvisited = set(range(self.n)) if vertices is None else set(vertices)
        components = []
        while unvisited:
            start = min(unvisited)
            unvisited.discard(start)
            component, queue = [start], [start]
            while queue:
                u = queue.pop()
                non_neighbors = unvisited - self.adjacency[u]
                unvisited -= non_neighbors
                component.extend(non_neighbors)
                queue.extend(non_neighbors)
            components.append(sorted(component))
        return components

    @property
    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def induced_subgraph(self, vertices: Iterable[int]) -> "Graph":
        """ Subgraph induced by ``vertices``, relabeled to 0..k-1 in increasing vertex order. """
        order = sorted(set(vertices))
        index = {v: i for i, v in enumerate(order)}
        return Graph(len(order), frozenset((index[u], index[v]) for u, v in self.edges
                                           if u in index and v in index))

    def relabel(self, order: list[int] | tuple[int, ...]) -> "Graph":
        """ Return the graph whose vertex i is the old vertex order[i]. """
        position = {v: i for i, v in enumerate(order)}
        return Graph(self.n, frozenset((position[u], position[v]) for u, v in self.edges))

    def disjoint_union(self, other: "Graph") -> "Graph":
        shifted = ((u + self.n, v + self.n) for u, v in other.edges)
        return Graph(self.n + other.n, self.edges | frozenset(shifted))

    def adjacency_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.n, self.n))
        for u, v in self.edges:
            matrix[u, v] = matrix[v, u] = 1.0
        return matrix

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    def short_name(self) -> str:
        if not self.edges:
            return f"{self.n}K1"
        if self.number_of_edges == self.n * (self.n - 1) // 2:
            return f"K{self.n}"
        return f"G[{self.n};" + ",".join(f"{u}-{v}" for u, v in sorted(self.edges)) + "]"


class SpectralMethod(Enum):
    POWER_ITERATION = "power-iteration"
    QUOTIENT_EXACT = "quotient-exact"
    CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class SpectralValue:
    value: float
    method: SpectralMethod
    tolerance: float = 0.0
    interval: tuple[float, float] | None = None  # Collatz-Wielandt bracket for power iteration

    def __post_init__(self):
        if self.value < 0:
            raise ParameterRangeError(f"Spectral radius must be non-negative, got {self.value}.")

    def __float__(self):
        return self.value

    def to_dict(self) -> dict[str, Any]:
        data = {"value": self.value, "method": self.method.value, "tolerance": self.tolerance}
        if self.interval is not None:
            data["interval"] = list(self.interval)
        return data


class ClosedFormRho(NamedTuple):
    nominal: SpectralValue  # radicand (3q^2+2q+1)/4 as usually quoted
    exact: SpectralValue  # radicand (3q^2+2q-1)/4 from the 2x2 quotient


@dataclass(frozen=True)
class QuotientMatrix:
    """ Quotient matrix of an equitable partition: entry (i, j) counts the neighbours in class j of a vertex in
    class i. """
    entries: tuple[tuple[Fraction, ...], ...]
    sizes: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        if any(len(row) != len(entries) for row in entries):
            raise ParameterRangeError("Quotient matrix must be square.")
        if len(self.sizes) != len(entries):
            raise ParameterRangeError("Quotient matrix needs one class size per row.")
        if any(x < 0 for row in entries for x in row):
            raise ParameterRangeError("Quotient matrix entries must be non-negative.")
        if any(size <= 0 for size in self.sizes):
            raise ParameterRangeError("Class sizes must be positive.")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "sizes", tuple(self.sizes))

    @property
    def order(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def as_lists(self) -> list[list[float]]:
        return [[float(x) for x in row] for row in self.entries]


@dataclass(frozen=True)
class SpiderProfile:
    center: int
    legs: tuple[int, ...]  # descending
    r1: int  # odd legs of length >= 5
    r2: int  # legs of length 3
    r3: int  # legs of length 1
    s: int  # even legs

    @classmethod
    def from_legs(cls, center: int, legs: Iterable[int]) -> "SpiderProfile":
        legs = tuple(sorted(legs, reverse=True))
        return cls(center=center, legs=legs,
                   r1=sum(1 for x in legs if x % 2 == 1 and x >= 5),
                   r2=sum(1 for x in legs if x == 3),
                   r3=sum(1 for x in legs if x == 1),
                   s=sum(1 for x in legs if x % 2 == 0))

    @property
    def r(self) -> int:
        return self.r1 + self.r2 + self.r3

    def to_dict(self) -> dict[str, Any]:
        return {"center": self.center, "legs": list(self.legs), "r1": self.r1, "r2": self.r2, "r3": self.r3,
                "s": self.s, "r": self.r}


@dataclass(frozen=True)
class TreeProfile:
    l: int
    side_a: tuple[int, ...]
    side_b: tuple[int, ...]
    q: int
    delta: int
    beta: int
    nu: int
    diameter: int
    spider: SpiderProfile | None = None
    ambiguous_orientation: bool = False

    def __post_init__(self):
        if len(self.side_a) + len(self.side_b) != self.l or len(self.side_a) > len(self.side_b):
            raise ParameterRangeError("Bipartition sides must cover the tree with |A| <= |B|.")

    @property
    def is_star(self) -> bool:
        return self.q == 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "l": self.l, "A": list(self.side_a), "B": list(self.side_b), "q": self.q, "delta": self.delta,
            "beta": self.beta, "nu": self.nu, "diameter": self.diameter,
            "ambiguous_orientation": self.ambiguous_orientation,
            "spider": self.spider.to_dict() if self.spider else None,
        }


@dataclass(frozen=True)
class CoveringFamily:
    q: int
    patterns: tuple[Graph, ...]
    coverings: tuple[tuple[int, ...], ...] = ()  # witness covering per pattern, empty for the clique branch
    complete: bool = False  # True for the single-clique family {K_{q+1}}

    def summary(self) -> str:
        return "{" + ", ".join(p.short_name() for p in self.patterns) + "}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "q": self.q, "complete": self.complete, "summary": self.summary(),
            "patterns": [{"order": p.n, "edges": [list(e) for e in sorted(p.edges)],
                          "covering": list(c) if c else None}
                         for p, c in zip(self.patterns, self.coverings or [()] * len(self.patterns))],
        }


@dataclass(frozen=True)
class ExtremalSet:
    q: int
    family: CoveringFamily
    max_edges: int
    witnesses: tuple[Graph, ...]


class Family(Enum):
    S = "S"  # K_k joined with pK2 ∪ (n-k-2p)K1
    K = "K"  # K_{a,b} with p independent edges in the b-side
    H = "H"  # Q joined with (n-q)K1 for a core graph Q


@dataclass(frozen=True)
class GraphDescriptor:
    family: Family
    n: int
    k: int  # order of the dominating side (k, a or q)
    p: int = 0
    core: Graph | None = None

    @classmethod
    def S(cls, n: int, k: int, p: int) -> "GraphDescriptor":
        return cls(Family.S, n, k, p)

    @classmethod
    def K(cls, a: int, b: int, p: int = 0) -> "GraphDescriptor":
        return cls(Family.K, a + b, a, p)

    @classmethod
    def H(cls, n: int, core: Graph) -> "GraphDescriptor":
        return cls(Family.H, n, core.n, 0, core)

    def label(self) -> str:
        match self.family:
            case Family.S:
                return f"S({self.n},{self.k},{self.p})"
            case Family.K:
                return f"K({self.k},{self.n - self.k})" + (f"^{self.p}" if self.p else "")
            case _:
                return f"H({self.n},{self.core.short_name()})"

    def instantiate(self) -> Graph:
        from .graphs import construct_S, construct_K_ab_p, join, empty_graph  # to avoid circular imports
        match self.family:
            case Family.S:
                return construct_S(self.n, self.k, self.p)
            case Family.K:
                return construct_K_ab_p(self.k, self.n - self.k, self.p)
            case _:
                return join(self.core, empty_graph(self.n - self.k))

    def spectral_radius(self) -> SpectralValue:
        from .graphs import descriptor_spectral_radius
        return descriptor_spectral_radius(self)

    def to_dict(self) -> dict[str, Any]:
        match self.family:
            case Family.S:
                return {"family": "S", "n": self.n, "k": self.k, "p": self.p}
            case Family.K:
                data = {"family": "K", "a": self.k, "b": self.n - self.k}
                if self.p:
                    data["p"] = self.p
                return data
            case _:
                return {"family": "H", "n": self.n, "q": self.k,
                        "core": [list(e) for e in sorted(self.core.edges)]}


class PredictionKind(Enum):
    EXACT_UNIQUE = "exact-unique"
    FAMILY_CONTAINMENT = "family-containment"
    BOUNDS_ONLY = "bounds-only"
    OUT_OF_DOMAIN = "out-of-domain"


class LowerBound(NamedTuple):
    nominal: SpectralValue  # closed form quoted with radicand (3q^2+2q+1)/4, JSON key "paper"
    exact: SpectralValue  # quotient-exact rho(S_{n,q}^1)


class BoundsResult(NamedTuple):
    lower: LowerBound
    upper: SpectralValue
    anchor: float  # sqrt(q n)


@dataclass(frozen=True)
class Prediction:
    kind: PredictionKind
    n: int
    theorem: str
    case: str
    graphs: tuple[GraphDescriptor, ...] = ()
    lower: LowerBound | None = None
    upper: SpectralValue | None = None
    anchor: float | None = None
    warnings: tuple[str, ...] = ()
    below_threshold: bool = False

    def __post_init__(self):
        if self.kind is PredictionKind.EXACT_UNIQUE and len(self.graphs) != 1:
            raise ParameterRangeError("An exact-unique prediction carries exactly one graph.")
        if self.kind is PredictionKind.BOUNDS_ONLY and not self.lower.exact.value < self.upper.value:
            raise ParameterRangeError("Bounds must satisfy lower < upper.")

    @property
    def is_exact(self) -> bool:
        return self.kind is PredictionKind.EXACT_UNIQUE

    def to_dict(self, with_rho: bool = True) -> dict[str, Any]:
        graphs = []
        for descriptor in self.graphs:
            entry = descriptor.to_dict()
            if with_rho:
                entry["rho"] = descriptor.spectral_radius().value
            graphs.append(entry)
        return {
            "schema": SCHEMA,
            "kind": self.kind.value,
            "n": self.n,
            "theorem": self.theorem,
            "case": self.case,
            "graphs": graphs,
            "lower": {"paper": self.lower.nominal.value, "exact": self.lower.exact.value} if self.lower else None,
            "upper": self.upper.value if self.upper else None,
            "anchor": self.anchor,
            "warnings": list(self.warnings),
        }


class EmbeddingStatus(Enum):
    FOUND = "found"
    ABSENT = "absent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class EmbeddingWitness:
    status: EmbeddingStatus
    mapping: dict[int, int] | None = None  # pattern vertex -> host vertex
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status is EmbeddingStatus.FOUND


class OracleLevel(Enum):
    EXHAUSTIVE = "exhaustive"
    JOINFORM_EXHAUSTIVE_R = "joinform-exhaustive-r"
    JOINFORM_MATCHING_R = "joinform-matching-r"

    @property
    def restricted(self) -> bool:
        return self is OracleLevel.JOINFORM_MATCHING_R


@dataclass(frozen=True)
class OracleResult:
    value: SpectralValue
    maximizers: tuple[Graph, ...]
    level: OracleLevel
    candidates: int = 0

    @property
    def label(self) -> str:
        return "restricted-family optimum" if self.level.restricted else "optimum"


class Outcome(Enum):
    AGREE = "agree"
    TIE = "tie"
    DISAGREE = "disagree"
    INCONCLUSIVE = "inconclusive"


@dataclass
class NResult:
    n: int
    oracle: OracleLevel | None
    outcome: Outcome
    predicted_rho: float | None = None
    oracle_rho: float | None = None
    maximizers: list[str] = field(default_factory=list)  # graph6
    free_checks: dict[str, bool | None] = field(default_factory=dict)
    below_threshold: bool = False
    runtime: float = 0.0
    warnings: list[str] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return self.outcome in (Outcome.AGREE, Outcome.TIE)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n, "oracle": self.oracle.value if self.oracle else None, "outcome": self.outcome.value,
            "agree": self.agree, "predicted_rho": self.predicted_rho, "oracle_rho": self.oracle_rho,
            "maximizers": self.maximizers, "free_checks": self.free_checks,
            "below_threshold": self.below_threshold, "runtime": round(self.runtime, 3),
            "warnings": self.warnings,
        }


@dataclass
class VerificationReport:
    tree: str
    n_values: list[int]
    predictions: dict[int, Prediction] = field(default_factory=dict)
    results: list[NResult] = field(default_factory=list)

    @property
    def confirmed_disagreement(self) -> bool:
        return any(r.outcome is Outcome.DISAGREE and not r.below_threshold for r in self.results)

    @property
    def inconclusive(self) -> bool:
        return any(r.outcome is Outcome.INCONCLUSIVE for r in self.results)

    def to_dict(self, with_runtime: bool = True) -> dict[str, Any]:
        results = [r.to_dict() for r in self.results]
        if not with_runtime:
            for r in results:
                r.pop("runtime")
        return {
            "schema": SCHEMA,
            "tree": self.tree,
            "n": self.n_values,
            "predictions": {str(n): p.to_dict() for n, p in sorted(self.predictions.items())},
            "results": results,
        }

    def csv_rows(self) -> list[list[Any]]:
        rows = [["n", "predicted_rho", "oracle_rho", "agree"]]
        for r in self.results:
            rows.append([r.n, r.predicted_rho, r.oracle_rho, r.agree])
        return rows

    def log_summary(self) -> None:
        for r in self.results:
            logging.info(f"{self.tree} n={r.n}: {r.outcome.value} (predicted {r.predicted_rho}, oracle {r.oracle_rho})")
