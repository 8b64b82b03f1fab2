"""Fixed pattern graphs for the minor tests.

Winged patterns use ids w1..w7 -> 0..6, so the marked edge w1w2 is (0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from sip3.core.errors import GraphError
from sip3.models.graph import Graph, build_graph, complete_graph

WING_EDGE = (0, 1)


def k222() -> Graph:
    # parts {0,1}, {2,3}, {4,5}
    parts = ((0, 1), (2, 3), (4, 5))
    return build_graph(6, [e for e in combinations(range(6), 2) if e not in parts])


def wagner_v8() -> Graph:
    edges = [(i, (i + 1) % 8) for i in range(8)] + [(i, i + 4) for i in range(4)]
    return build_graph(8, edges)


def pentagonal_prism() -> Graph:
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 1) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    return build_graph(10, edges)


def winged_k5() -> Graph:
    # K4 on w3..w6; w1 ~ w2, w3, w4; w2 ~ w5, w6
    edges = list(combinations((2, 3, 4, 5), 2)) + [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]
    return build_graph(6, edges)


def winged_k222() -> Graph:
    # contracting w1w2 gives K222 with antipodal pairs {w1w2, w7}, {w3, w5}, {w4, w6}
    edges = [
        (0, 1), (0, 2), (0, 3), (1, 4), (1, 5),
        (2, 3), (3, 4), (4, 5), (2, 5),
        (6, 2), (6, 3), (6, 4), (6, 5),
    ]
    return build_graph(7, edges)


@dataclass(frozen=True)
class PatternCatalog:
    k3: Graph
    k4: Graph
    k5: Graph
    k222: Graph
    v8: Graph
    c5xc2: Graph
    winged_k5: Graph
    winged_k222: Graph

    def by_name(self, name: str) -> Graph:
        key = name.strip().lower().replace("-", "_").replace(",", "")
        aliases = {"k2_2_2": "k222", "k222": "k222", "c5xk2": "c5xc2", "prism": "c5xc2"}
        key = aliases.get(key, key)
        if key not in self.__dataclass_fields__:
            raise GraphError(f"unknown pattern {name!r}")
        return getattr(self, key)

    def forbidden(self, d: int) -> tuple[Graph, ...]:
        """Forbidden minors for d-flattenability, smallest first."""
        if d == 1:
            return (self.k3,)
        if d == 2:
            return (self.k4,)
        if d == 3:
            return (self.k5, self.k222)
        raise GraphError(f"no forbidden-minor list for d={d}")

    def partial_3_tree_obstructions(self) -> tuple[Graph, ...]:
        return (self.k5, self.k222, self.v8, self.c5xc2)


@lru_cache(maxsize=1)
def catalog() -> PatternCatalog:
    return PatternCatalog(
        k3=complete_graph(3),
        k4=complete_graph(4),
        k5=complete_graph(5),
        k222=k222(),
        v8=wagner_v8(),
        c5xc2=pentagonal_prism(),
        winged_k5=winged_k5(),
        winged_k222=winged_k222(),
    )


