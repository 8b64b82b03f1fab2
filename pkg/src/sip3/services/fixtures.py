"""Labelled corpus of small graph-nonedge pairs.

Every expected property carries its provenance. Entries whose adjacency was
reconstructed rather than read off carry an oracle; building the corpus fails
loudly when one of them does not hold.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterator

import networkx as nx

from sip3.core.errors import InvariantViolation
from sip3.models.graph import Graph, VertexPair, build_graph, complete_graph, from_networkx, path_graph
from sip3.models.minor import MinorConstraints
from sip3.services.decomposition import is_atom
from sip3.services.flattenability import is_3_tree, is_d_flattenable, is_partial_3_tree
from sip3.services.minors import brute_force_minor_oracle
from sip3.services.patterns import WING_EDGE, catalog
from sip3.services.sip import classify_edge, decide_sip, is_minimal_pair

logger = logging.getLogger(__name__)


class Source(str, Enum):
    PUBLISHED = "PUBLISHED"
    TRIVIAL = "TRIVIAL"
    DERIVED = "DERIVED"


@dataclass(frozen=True)
class Expectation:
    value: object
    source: Source


@dataclass(frozen=True)
class FixtureEntry:
    name: str
    graph: Graph
    nonedge: VertexPair | None = None
    expected: dict[str, Expectation] = field(default_factory=dict)
    oracle: Callable[[], bool] | None = field(default=None, compare=False, repr=False)
    description: str = ""


@dataclass(frozen=True)
class CheckRow:
    fixture: str
    prop: str
    expected: object
    actual: object
    source: Source

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


def _doubled_k5() -> Graph:
    # u=0 v=1 x=2 w=3 h1=4 h2=5
    return build_graph(
        6,
        [(0, 2), (1, 2), (0, 3), (1, 3), (1, 4), (1, 5), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)],
    )


def _k222_transfer() -> Graph:
    # K2,2,2 on x v a' b' c c' minus xc, plus u adjacent to x and c; u=0 x=1 v=2 a'=3 b'=4 c=5 c'=6
    return build_graph(
        7,
        [
            (0, 1), (0, 5), (1, 2), (1, 4), (1, 6), (2, 3), (2, 5), (2, 6),
            (3, 4), (3, 5), (3, 6), (4, 5), (4, 6),
        ],
    )


def _three_tree() -> Graph:
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    edges += [(4, 0), (4, 1), (4, 2), (5, 1), (5, 2), (5, 4), (6, 2), (6, 4), (6, 5)]
    return build_graph(7, edges)


def _no_preserving_forbidden(G: Graph, f: VertexPair) -> bool:
    cat = catalog()
    c = MinorConstraints(preserve=(f,))
    return not any(brute_force_minor_oracle(G, p, c) for p in (cat.k5, cat.k222))


def _has_preserving_forbidden(G: Graph, f: VertexPair) -> bool:
    cat = catalog()
    c = MinorConstraints(preserve=(f,))
    return any(brute_force_minor_oracle(G, p, c) for p in (cat.k5, cat.k222))


def _winged_oracle(pattern: Graph, forbidden: Graph) -> Callable[[], bool]:
    def check() -> bool:
        wing = VertexPair(*WING_EDGE)
        return brute_force_minor_oracle(pattern, forbidden) and _no_preserving_forbidden(pattern, wing)

    return check


def _all_entries() -> list[FixtureEntry]:
    P, T, D = Source.PUBLISHED, Source.TRIVIAL, Source.DERIVED
    cat = catalog()
    f01 = VertexPair(0, 1)
    wing = VertexPair(*WING_EDGE)
    doubled_k5 = _doubled_k5()
    k222_transfer = _k222_transfer()
    three = _three_tree()
    return [
        FixtureEntry(
            "path_k3",
            path_graph(3),
            VertexPair(0, 2),
            {"sip1": Expectation(False, P), "sip2": Expectation(True, P)},
            description="path u-w-v with f = uv, so G ∪ f is a triangle",
        ),
        FixtureEntry(
            "k4_minus_f",
            complete_graph(4).without_edges([f01]),
            f01,
            {"sip2": Expectation(False, P), "sip3": Expectation(True, T), "minimal": Expectation(False, T)},
        ),
        FixtureEntry(
            "k5_minus_f",
            complete_graph(5).without_edges([f01]),
            f01,
            {"sip3": Expectation(False, P), "minimal": Expectation(True, P), "flat3": Expectation(True, T)},
        ),
        FixtureEntry(
            "k222_minus_f",
            cat.k222.without_edges([(0, 2)]),
            VertexPair(0, 2),
            {"sip3": Expectation(False, P), "minimal": Expectation(True, P)},
        ),
        FixtureEntry(
            "winged_k5",
            cat.winged_k5.without_edges([wing]),
            wing,
            {"sip3": Expectation(True, P)},
            oracle=_winged_oracle(cat.winged_k5, cat.k5),
            description="winged K5 with the wing edge w1w2 as f",
        ),
        FixtureEntry(
            "winged_k222",
            cat.winged_k222.without_edges([wing]),
            wing,
            {"sip3": Expectation(True, P)},
            oracle=_winged_oracle(cat.winged_k222, cat.k222),
            description="winged K2,2,2 with the wing edge w1w2 as f",
        ),
        FixtureEntry("v8", cat.v8, None, {"p3t": Expectation(False, P), "flat3": Expectation(True, D)}),
        FixtureEntry("c5xc2", cat.c5xc2, None, {"p3t": Expectation(False, P)}),
        FixtureEntry(
            "three_tree",
            three,
            None,
            {"three_tree": Expectation(True, T), "p3t": Expectation(True, T)},
        ),
        FixtureEntry(
            "three_tree_minus_f",
            three.without_edges([f01]),
            f01,
            {"sip3": Expectation(True, P)},
        ),
        FixtureEntry(
            "doubled_k5",
            doubled_k5,
            f01,
            {"sip3": Expectation(False, D), "edge_type:0,2": Expectation(3, P), "atom": Expectation(True, D)},
            oracle=lambda: _has_preserving_forbidden(doubled_k5.with_edges([f01]), f01),
            description="u=0 v=1 x=2 w=3 h1=4 h2=5, f = uv",
        ),
        FixtureEntry(
            "k222_transfer",
            k222_transfer,
            VertexPair(0, 2),
            {"sip3": Expectation(False, D)},
            oracle=lambda: _has_preserving_forbidden(k222_transfer.with_edges([(0, 2)]), VertexPair(0, 2)),
            description="K2,2,2 minus xc with a degree-2 vertex u on x and c; f = uv",
        ),
    ]


def _evaluate(entry: FixtureEntry, prop: str) -> object:
    G, f = entry.graph, entry.nonedge
    if prop.startswith("sip"):
        assert f is not None
        return decide_sip(G, f, int(prop[3:])).answer
    if prop == "minimal":
        assert f is not None
        return is_minimal_pair(G, f)
    if prop.startswith("edge_type:"):
        assert f is not None
        return int(classify_edge(G, f, VertexPair.parse(prop.split(":", 1)[1])))
    if prop == "atom":
        assert f is not None
        return is_atom(G.with_edges([f]))
    if prop == "p3t":
        return is_partial_3_tree(G)
    if prop == "three_tree":
        return is_3_tree(G)
    if prop.startswith("flat"):
        return is_d_flattenable(G, int(prop[4:]))
    raise KeyError(prop)


@lru_cache(maxsize=1)
def corpus() -> tuple[FixtureEntry, ...]:
    entries = tuple(_all_entries())
    failed = [e.name for e in entries if e.oracle is not None and not e.oracle()]
    if failed:
        logger.error("fixture oracles failed: %s", ", ".join(failed))
        raise InvariantViolation(f"reconstructed fixtures fail their oracle: {', '.join(failed)}")
    return entries


def fixture(name: str) -> FixtureEntry:
    for entry in corpus():
        if entry.name == name:
            return entry
    raise KeyError(name)


def check_corpus(entries: tuple[FixtureEntry, ...] | None = None) -> list[CheckRow]:
    rows = []
    for entry in entries if entries is not None else corpus():
        for prop, exp in entry.expected.items():
            rows.append(CheckRow(entry.name, prop, exp.value, _evaluate(entry, prop), exp.source))
    return rows


def connected_graphs(max_n: int, min_n: int = 1) -> Iterator[Graph]:
    """Connected graphs up to isomorphism from the networkx atlas (at most 7 vertices)."""
    for g in nx.graph_atlas_g():
        if min_n <= g.number_of_nodes() <= max_n and g.number_of_nodes() > 0 and nx.is_connected(g):
            yield from_networkx(g)


def discover_minimal_pairs(max_n: int = 7) -> Iterator[tuple[Graph, VertexPair]]:
    """Exhaustive search for minimal pairs over small connected graphs."""
    for G in connected_graphs(max_n, min_n=5):
        for f in G.nonedges():
            if is_minimal_pair(G, f):
                yield G, f
