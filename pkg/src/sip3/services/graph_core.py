from __future__ import annotations

import logging
from itertools import combinations
from typing import Iterable

import networkx as nx

from sip3.core.errors import GraphError
from sip3.models.graph import Graph, as_pair

logger = logging.getLogger(__name__)


def _check_vertices(G: Graph, U: Iterable[int]) -> list[int]:
    vs = sorted(set(int(u) for u in U))
    for u in vs:
        if not (0 <= u < G.n):
            raise GraphError(f"vertex {u} out of range 0..{G.n - 1}")
    return vs


def induced_subgraph(G: Graph, U: Iterable[int]) -> Graph:
    """G[U] with local ids in increasing order of U; `labels` carries the ids of G's root."""
    vs = _check_vertices(G, U)
    index = {v: i for i, v in enumerate(vs)}
    edges = frozenset(
        (index[u], index[v]) for u, v in G.edges if u in index and v in index
    )
    return Graph(len(vs), edges, tuple(G.label(v) for v in vs))


def _without(G: Graph, removed: Iterable[int]) -> nx.Graph:
    return nx.restricted_view(G.nx_view, set(removed), [])


def connected_components(G: Graph, removed: Iterable[int] = ()) -> list[frozenset[int]]:
    """Components of G minus `removed`, ordered by smallest vertex."""
    comps = (frozenset(c) for c in nx.connected_components(_without(G, removed)))
    return sorted(comps, key=min)


def u_components(G: Graph, U: Iterable[int]) -> list[Graph]:
    """One induced subgraph on V(K) ∪ U per connected component K of G∖U."""
    us = _check_vertices(G, U)
    comps = connected_components(G, us)
    if len(comps) <= 1:
        return [induced_subgraph(G, G.vertices())]
    return [induced_subgraph(G, set(k) | set(us)) for k in comps]


def vertex_connectivity(G: Graph) -> int:
    if G.n < 1:
        raise GraphError("vertex connectivity needs at least one vertex")
    if G.is_complete():
        return G.n - 1
    if not G.is_connected():
        return 0
    return int(nx.node_connectivity(G.nx_view))


def separates(G: Graph, S: Iterable[int], u: int, v: int) -> bool:
    gone = set(S)
    if u in gone or v in gone:
        return False
    return not nx.has_path(_without(G, gone), u, v)


def minimal_pair_separators(G: Graph, u: int, v: int, max_size: int) -> list[frozenset[int]]:
    """All inclusion-minimal uv-separators with at most `max_size` vertices.

    When uv is an edge the separators are those of G∖uv.
    """
    pair = as_pair((u, v))
    _check_vertices(G, pair)
    H = G.without_edges([pair]) if G.has_edge(u, v) else G
    candidates = [x for x in H.vertices() if x not in (u, v)]
    found: list[frozenset[int]] = []
    for size in range(0, min(max_size, len(candidates)) + 1):
        for S in combinations(candidates, size):
            if not separates(H, S, u, v):
                continue
            # separation is monotone under supersets, so single-vertex removals decide minimality
            if all(not separates(H, set(S) - {x}, u, v) for x in S):
                found.append(frozenset(S))
    found.sort(key=lambda s: sorted(s))
    logger.debug("minimal %s-%s separators up to size %d: %d", u, v, max_size, len(found))
    return found
