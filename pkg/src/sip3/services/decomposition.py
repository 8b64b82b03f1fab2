"""Clique minimal separator decomposition.

MCS-M gives a minimal elimination ordering together with its minimal
separator generators; the atoms are then peeled off in elimination order,
one clique minimal separator at a time.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import networkx as nx

from sip3.core.errors import GraphError, HostTooLarge, PreconditionError
from sip3.models.graph import Graph, PairLike, as_pair
from sip3.services.graph_core import connected_components, induced_subgraph, u_components

logger = logging.getLogger(__name__)

VertexSet = tuple[int, ...]
BRUTE_FORCE_MAX_VERTICES = 8


@dataclass(frozen=True)
class AtomDecomposition:
    atoms: tuple[VertexSet, ...]
    cms_list: tuple[VertexSet, ...]
    atom_tree: nx.Graph = field(compare=False, repr=False)

    def atoms_containing(self, vertices: Iterable[int]) -> list[VertexSet]:
        want = set(vertices)
        return [a for a in self.atoms if want <= set(a)]


@dataclass(frozen=True)
class _Elimination:
    order: tuple[int, ...]            # order[i] is the vertex numbered i+1 (eliminated first)
    madj: tuple[frozenset[int], ...]  # higher-numbered neighbours in the triangulation
    generators: frozenset[int]


def _mcs_m(G: Graph) -> _Elimination:
    n = G.n
    weight = [0] * n
    numbered = [False] * n
    number = [0] * n
    madj: list[set[int]] = [set() for _ in range(n)]
    generators: set[int] = set()
    prev = -1
    for i in range(n, 0, -1):
        # highest weight, ties to the lowest id
        x = min((v for v in range(n) if not numbered[v]), key=lambda v: (-weight[v], v))
        if weight[x] <= prev:
            generators.add(x)
        prev = weight[x]
        numbered[x] = True
        number[x] = i

        # y is reached if some path x..y over unnumbered vertices has all inner weights < w(y)
        best: dict[int, int] = {}
        heap: list[tuple[int, int]] = []
        for y in G.adj[x]:
            if not numbered[y]:
                best[y] = -1
                heapq.heappush(heap, (-1, y))
        done: set[int] = set()
        while heap:
            b, z = heapq.heappop(heap)
            if z in done or b != best.get(z):
                continue
            done.add(z)
            through = max(b, weight[z])
            for y in G.adj[z]:
                if numbered[y] or y in done:
                    continue
                if through < best.get(y, n + 1):
                    best[y] = through
                    heapq.heappush(heap, (through, y))
        reached = [y for y, b in best.items() if b < weight[y]]
        for y in reached:
            weight[y] += 1
            madj[y].add(x)
    order = tuple(sorted(range(n), key=lambda v: number[v]))
    return _Elimination(order, tuple(frozenset(s) for s in madj), frozenset(generators))


def _decompose_connected(G: Graph) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    elim = _mcs_m(G)
    remaining = set(G.vertices())
    atoms: list[frozenset[int]] = []
    seps: list[frozenset[int]] = []
    for x in elim.order:
        if x not in elim.generators:
            continue
        S = elim.madj[x]
        if not S or not G.is_clique(S):
            continue
        rest = induced_subgraph(G, remaining)
        local_s = [rest.local(s) for s in S if s in remaining]
        if len(local_s) != len(S) or x not in remaining:
            continue
        comps = connected_components(rest, local_s)
        if len(comps) < 2:
            continue
        comp = next(c for c in comps if rest.local(x) in c)
        C = frozenset(rest.label(c) for c in comp)
        atoms.append(C | S)
        if S not in seps:
            seps.append(S)
        remaining -= C
    atoms.append(frozenset(remaining))
    return atoms, seps


def _normalize(sets: Iterable[frozenset[int]]) -> tuple[VertexSet, ...]:
    return tuple(sorted({tuple(sorted(s)) for s in sets}))


def build_atom_graph(atoms: tuple[VertexSet, ...], cms_list: tuple[VertexSet, ...]) -> nx.Graph:
    g = nx.Graph()
    for i, a in enumerate(atoms):
        g.add_node(("atom", i), vertices=a)
    for j, s in enumerate(cms_list):
        g.add_node(("cms", j), vertices=s)
        for i, a in enumerate(atoms):
            if set(s) <= set(a):
                g.add_edge(("cms", j), ("atom", i))
    return g


def _require_connected(G: Graph, what: str) -> None:
    if not G.is_connected():
        raise GraphError(f"{what} needs a connected graph")


def decompose_atoms(G: Graph) -> AtomDecomposition:
    _require_connected(G, "atom decomposition")
    atoms, seps = _decompose_connected(G)
    na, ns = _normalize(atoms), _normalize(seps)
    logger.debug("decomposed n=%d m=%d into %d atoms, %d CMS", G.n, G.m, len(na), len(ns))
    return AtomDecomposition(na, ns, build_atom_graph(na, ns))


def atoms_of(G: Graph) -> tuple[VertexSet, ...]:
    """Atoms of every connected component (isolated vertices are their own atoms)."""
    found: list[frozenset[int]] = []
    for comp in connected_components(G):
        sub = induced_subgraph(G, comp)
        atoms, _ = _decompose_connected(sub)
        found.extend(frozenset(sub.label(v) for v in a) for a in atoms)
    return _normalize(found)


def is_atom(G: Graph) -> bool:
    _require_connected(G, "atom test")
    return len(_decompose_connected(G)[0]) == 1


def atom_graph(dec: AtomDecomposition) -> nx.Graph:
    return dec.atom_tree


def cms_components(G: Graph, C: Iterable[int]) -> list[Graph]:
    sep = sorted(set(C))
    if not G.is_clique(sep):
        raise PreconditionError(f"{sep} is not a clique")
    if len(connected_components(G, sep)) < 2:
        raise PreconditionError(f"{sep} does not separate the graph")
    return u_components(G, sep)


def atoms_containing_pair(G: Graph, f: PairLike) -> list[Graph]:
    """Atom subgraphs of G that contain both endpoints of f (labels keep G's ids)."""
    pair = as_pair(f)
    dec = decompose_atoms(G)
    return [induced_subgraph(G, a) for a in dec.atoms_containing(pair)]


# -- brute-force oracle (small graphs) ------------------------------------


def _has_clique_separator(G: Graph) -> bool:
    for size in range(0, G.n - 1):
        for S in combinations(G.vertices(), size):
            if G.is_clique(S) and len(connected_components(G, S)) >= 2:
                return True
    return False


def brute_force_atoms(G: Graph) -> tuple[VertexSet, ...]:
    """Vertex-maximal connected induced subgraphs without a clique separator."""
    if G.n > BRUTE_FORCE_MAX_VERTICES:
        raise HostTooLarge(f"brute-force atoms refuse more than {BRUTE_FORCE_MAX_VERTICES} vertices")
    candidates: list[frozenset[int]] = []
    for size in range(G.n, 0, -1):
        for U in combinations(G.vertices(), size):
            s = frozenset(U)
            if any(s <= c for c in candidates):
                continue
            sub = induced_subgraph(G, U)
            if sub.is_connected() and not _has_clique_separator(sub):
                candidates.append(s)
    return _normalize(candidates)
