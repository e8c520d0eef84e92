import re
from abc import ABCMeta, abstractmethod

import networkx as nx

from ._data_structures import Graph
from ._errors import GraphFormatError

_HEADER = re.compile(r"#\s*n\s*=\s*(\d+)\s*$")


class GraphCodec(metaclass=ABCMeta):
    """ Text serialization of :class:`Graph` objects. """
    name: str

    def __repr__(self):
        return f"{self.__class__.__name__}({self.name!r})"

    def encode(self, graph: Graph) -> str:
        return self._encode(graph)

    @abstractmethod
    def _encode(self, graph: Graph) -> str:
        raise NotImplementedError

    def decode(self, text: str) -> Graph:
        try:
            return self._decode(text)
        except GraphFormatError:
            raise
        except (ValueError, nx.NetworkXError) as e:
            raise GraphFormatError(f"Could not decode {self.name} input: {e}") from e

    @abstractmethod
    def _decode(self, text: str) -> Graph:
        raise NotImplementedError


class EdgeListCodec(GraphCodec):
    """ One ``u v`` pair per line, 0-indexed. ``#`` starts a comment; a leading ``# n=<count>`` line fixes the vertex
    count so isolated vertices survive a round trip. """
    name = "edge-list"

    def _encode(self, graph: Graph) -> str:
        lines = [f"# n={graph.n}"] + [f"{u} {v}" for u, v in sorted(graph.edges)]
        return "\n".join(lines) + "\n"

    def _decode(self, text: str) -> Graph:
        declared_n = None
        edges: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for number, raw in enumerate(text.splitlines(), start=1):
            header = _HEADER.match(raw.strip())
            if header and declared_n is None and not edges:
                declared_n = int(header.group(1))
                continue
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise GraphFormatError(f"expected two vertex indices, got {len(tokens)} tokens", line=number)
            try:
                u, v = int(tokens[0]), int(tokens[1])
            except ValueError as e:
                raise GraphFormatError(f"vertex indices must be integers: {line!r}", line=number) from e
            if u < 0 or v < 0:
                raise GraphFormatError(f"negative vertex index in {line!r}", line=number)
            if u == v:
                raise GraphFormatError(f"loop at vertex {u}", line=number)
            if declared_n is not None and max(u, v) >= declared_n:
                raise GraphFormatError(f"vertex {max(u, v)} outside the declared n={declared_n}", line=number)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {key[0]} {key[1]}", line=number)
            seen.add(key)
            edges.append(key)
        n = declared_n if declared_n is not None else max((v for e in edges for v in e), default=-1) + 1
        return Graph.from_edges(n, edges)


class Graph6Codec(GraphCodec):
    """ Header-free graph6, delegated to networkx. """
    name = "graph6"

    def _encode(self, graph: Graph) -> str:
        return nx.to_graph6_bytes(graph.to_networkx(), header=False).decode("ascii").strip()

    def _decode(self, text: str) -> Graph:
        data = text.strip().encode("ascii")
        if not data:
            raise GraphFormatError("empty graph6 string")
        return Graph.from_networkx(nx.from_graph6_bytes(data))


CODECS: dict[str, GraphCodec] = {codec.name: codec for codec in (EdgeListCodec(), Graph6Codec())}


def get_codec(name: str) -> GraphCodec:
    try:
        return CODECS[name]
    except KeyError as e:
        raise GraphFormatError(f"Unknown graph format {name!r}, expected one of {sorted(CODECS)}.") from e


def to_graph6(graph: Graph) -> str:
    return CODECS["graph6"].encode(graph)


def from_graph6(text: str) -> Graph:
    return CODECS["graph6"].decode(text)
