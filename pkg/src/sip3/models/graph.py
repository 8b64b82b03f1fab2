from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, TypeAlias

import networkx as nx

from sip3.core.errors import GraphError

Edge: TypeAlias = tuple[int, int]


def _norm(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True, init=False)
class VertexPair:
    """Unordered pair of distinct vertex ids; stored as (min, max)."""

    a: int
    b: int

    def __init__(self, a: int, b: int) -> None:
        a, b = int(a), int(b)
        if a == b:
            raise GraphError(f"vertex pair needs two distinct ids, got {a},{a}")
        lo, hi = _norm(a, b)
        object.__setattr__(self, "a", lo)
        object.__setattr__(self, "b", hi)

    @classmethod
    def parse(cls, text: str) -> "VertexPair":
        parts = [p.strip() for p in str(text).split(",")]
        if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
            raise GraphError(f"expected a pair like '0,1', got {text!r}")
        return cls(int(parts[0]), int(parts[1]))

    def __iter__(self) -> Iterator[int]:
        yield self.a
        yield self.b

    def as_edge(self) -> Edge:
        return (self.a, self.b)

    def other(self, x: int) -> int:
        if x == self.a:
            return self.b
        if x == self.b:
            return self.a
        raise GraphError(f"{x} is not an endpoint of {self}")

    def __str__(self) -> str:
        return f"{self.a},{self.b}"


PairLike: TypeAlias = "VertexPair | tuple[int, int]"


def as_pair(p: "PairLike") -> VertexPair:
    return p if isinstance(p, VertexPair) else VertexPair(*p)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on ids 0..n-1.

    `labels` maps each local id to the id it had in the graph it was extracted
    from (atoms, U-components, contractions of subgraphs); it is empty for a
    root graph, meaning the identity. Equality ignores labels.
    """

    n: int
    edges: frozenset[Edge]
    labels: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError("vertex count must be non-negative")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise GraphError(f"edge {u},{v} is not canonical for n={self.n}")
        if self.labels and len(self.labels) != self.n:
            raise GraphError("labels must name every vertex")

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return _norm(u, v) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def nonedges(self) -> list[VertexPair]:
        return [VertexPair(u, v) for u, v in combinations(range(self.n), 2) if (u, v) not in self.edges]

    def label(self, v: int) -> int:
        return self.labels[v] if self.labels else v

    def local(self, label: int) -> int:
        if not self.labels:
            if 0 <= label < self.n:
                return label
            raise GraphError(f"vertex {label} not in graph")
        try:
            return self.labels.index(label)
        except ValueError:
            raise GraphError(f"vertex {label} not in graph") from None

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = sorted(set(vertices))
        return all((u, v) in self.edges for u, v in combinations(vs, 2))

    def with_edges(self, pairs: Iterable["PairLike"]) -> "Graph":
        new = set(self.edges)
        for p in pairs:
            pair = as_pair(p)
            _check_ids(self.n, pair.a, pair.b)
            new.add(pair.as_edge())
        return Graph(self.n, frozenset(new), self.labels)

    def without_edges(self, pairs: Iterable["PairLike"]) -> "Graph":
        drop = {as_pair(p).as_edge() for p in pairs}
        return Graph(self.n, frozenset(e for e in self.edges if e not in drop), self.labels)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    @cached_property
    def nx_view(self) -> nx.Graph:
        """Frozen networkx copy, shared by the read-only graph queries."""
        return nx.freeze(self.to_networkx())

    def is_connected(self) -> bool:
        return self.n > 0 and nx.is_connected(self.nx_view)

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _check_ids(n: int, u: int, v: int) -> None:
    if u == v:
        raise GraphError(f"self-loop at {u}")
    if not (0 <= u < n and 0 <= v < n):
        raise GraphError(f"edge {u},{v} has an id out of range 0..{n - 1}")


def build_graph(n: int, edges: Iterable["PairLike | Iterable[int]"], *, labels: tuple[int, ...] = ()) -> Graph:
    """Validated construction; duplicate edges, self-loops and bad ids raise GraphError."""
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    seen: set[Edge] = set()
    for item in edges:
        if isinstance(item, VertexPair):
            u, v = item.a, item.b
        else:
            u, v = (int(x) for x in item)
        _check_ids(n, u, v)
        e = _norm(u, v)
        if e in seen:
            raise GraphError(f"duplicate edge {e[0]},{e[1]}")
        seen.add(e)
    return Graph(n, frozenset(seen), tuple(labels))


def from_networkx(g: nx.Graph) -> Graph:
    """Relabel nodes to 0..n-1 in sorted order; original node names become labels when they are ints."""
    nodes = sorted(g.nodes())
    index = {x: i for i, x in enumerate(nodes)}
    edges = [(index[u], index[v]) for u, v in g.edges() if u != v]
    labels = tuple(nodes) if all(isinstance(x, int) for x in nodes) and nodes != list(range(len(nodes))) else ()
    return build_graph(len(nodes), edges, labels=labels)


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(n), 2)))


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, frozenset(_norm(i, (i + 1) % n) for i in range(n)))
