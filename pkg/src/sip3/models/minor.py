from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from sip3.core.errors import PreconditionError
from sip3.models.graph import Edge, Graph, PairLike, VertexPair, as_pair


@dataclass(frozen=True)
class MinorMap:
    """A rooted minor [host] of shape `pattern`.

    `branch[x]` is the pattern vertex [x] of host vertex x; the map is total,
    so the branch sets [p]^{-1} partition V(host).
    """

    host: Graph
    pattern: Graph
    branch: tuple[int, ...]

    @cached_property
    def branch_sets(self) -> tuple[frozenset[int], ...]:
        sets: list[set[int]] = [set() for _ in range(self.pattern.n)]
        for x, p in enumerate(self.branch):
            if 0 <= p < self.pattern.n:
                sets[p].add(x)
        return tuple(frozenset(s) for s in sets)

    def image(self, x: int) -> int:
        return self.branch[x]

    def preimage(self, p: int) -> frozenset[int]:
        return self.branch_sets[p]

    def crossing_edges(self, p: int, q: int) -> list[Edge]:
        """[pq]^{-1}: host edges with one endpoint in each branch set."""
        return sorted(
            (u, v)
            for u, v in self.host.edges
            if {self.branch[u], self.branch[v]} == {p, q} and p != q
        )

    @cached_property
    def deleted(self) -> frozenset[Edge]:
        """Host edges whose branch sets map to a pattern nonedge."""
        return frozenset(
            (u, v)
            for u, v in self.host.edges
            if self.branch[u] != self.branch[v] and not self.pattern.has_edge(self.branch[u], self.branch[v])
        )

    def is_preserved(self, pair: PairLike) -> bool:
        p = as_pair(pair)
        return self.branch[p.a] != self.branch[p.b]

    def is_contracted(self, pair: PairLike) -> bool:
        return not self.is_preserved(pair)

    def is_doubled(self, pair: PairLike) -> bool:
        p = as_pair(pair)
        if not self.is_preserved(p):
            return False
        crossing = len(self.crossing_edges(self.branch[p.a], self.branch[p.b]))
        return crossing >= (2 if self.host.has_edge(p.a, p.b) else 1)

    def is_retained(self, pair: PairLike) -> bool:
        return self.is_preserved(pair) and not self.is_doubled(pair)

    def is_induced(self) -> bool:
        return not self.deleted

    def as_labeled_sets(self) -> dict[int, list[int]]:
        """Branch sets keyed by pattern vertex, in the host's root labels."""
        return {p: sorted(self.host.label(x) for x in s) for p, s in enumerate(self.branch_sets)}


@dataclass(frozen=True)
class MinorConstraints:
    pins: tuple[tuple[int, int], ...] = ()
    preserve: tuple[VertexPair, ...] = ()
    retain: tuple[VertexPair, ...] = ()
    # quotient of the branch sets must equal the pattern (no deleted crossing edges)
    induced: bool = False
    pinned: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "preserve", tuple(as_pair(p) for p in self.preserve))
        object.__setattr__(self, "retain", tuple(as_pair(p) for p in self.retain))
        pinned: dict[int, int] = {}
        for host_v, pattern_v in self.pins:
            prev = pinned.get(int(host_v))
            if prev is not None and prev != int(pattern_v):
                raise PreconditionError(f"host vertex {host_v} pinned to both {prev} and {pattern_v}")
            pinned[int(host_v)] = int(pattern_v)
        object.__setattr__(self, "pins", tuple(sorted(pinned.items())))
        object.__setattr__(self, "pinned", pinned)

    @property
    def separated(self) -> tuple[VertexPair, ...]:
        """Pairs that must land in distinct branch sets."""
        return self.preserve + self.retain

    def is_empty(self) -> bool:
        return not (self.pins or self.preserve or self.retain or self.induced)


NO_CONSTRAINTS = MinorConstraints()
