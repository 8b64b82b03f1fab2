from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

from sip3.core.errors import HostTooLarge, InvariantViolation, PreconditionError
from sip3.models.graph import Graph, VertexPair, as_pair
from sip3.services.decomposition import atoms_of
from sip3.services.graph_core import connected_components, induced_subgraph, vertex_connectivity
from sip3.services.minors import contract_edge, find_rooted_minor
from sip3.services.patterns import catalog

logger = logging.getLogger(__name__)

TREEWIDTH_MAX_VERTICES = 16


def _check_dim(d: int) -> int:
    if d not in (1, 2, 3):
        raise PreconditionError(f"dimension must be 1, 2 or 3, got {d}")
    return int(d)


def _pieces(G: Graph, *, by_atom: bool) -> list[Graph]:
    if by_atom:
        return [induced_subgraph(G, a) for a in atoms_of(G)]
    return [induced_subgraph(G, c) for c in connected_components(G)]


def _has_minor(G: Graph, pattern: Graph, *, by_atom: bool, budget: int | None = None) -> bool:
    # a complete minor always sits inside one atom; other patterns are searched per component
    for piece in _pieces(G, by_atom=by_atom):
        if piece.n < pattern.n or piece.m < pattern.m:
            continue
        if find_rooted_minor(piece, pattern, budget=budget) is not None:
            return True
    return False


def is_d_flattenable(G: Graph, d: int, *, budget: int | None = None) -> bool:
    d = _check_dim(d)
    cat = catalog()
    for pattern in cat.forbidden(d):
        if _has_minor(G, pattern, by_atom=pattern.is_complete(), budget=budget):
            logger.info("graph n=%d m=%d has a forbidden minor for d=%d (%d vertices)", G.n, G.m, d, pattern.n)
            return False
    return True


def is_partial_3_tree(G: Graph, *, budget: int | None = None) -> bool:
    """No K5, K2,2,2, V8 or C5×C2 minor; treewidth is the max over the atoms."""
    for atom in _pieces(G, by_atom=True):
        if atom.n < 5:
            continue
        for pattern in catalog().partial_3_tree_obstructions():
            if atom.n >= pattern.n and atom.m >= pattern.m and find_rooted_minor(atom, pattern, budget=budget) is not None:
                logger.debug("atom of size %d contains a %d-vertex obstruction", atom.n, pattern.n)
                return False
    return True


def is_3_tree(G: Graph) -> bool:
    if G.n < 4:
        return False
    alive = set(G.vertices())
    adj = {v: set(G.adj[v]) for v in G.vertices()}
    while len(alive) > 4:
        x = next(
            (v for v in sorted(alive) if len(adj[v]) == 3 and G.is_clique(adj[v])),
            None,
        )
        if x is None:
            return False
        for y in adj[x]:
            adj[y].discard(x)
        alive.discard(x)
        del adj[x]
    return all(len(adj[v]) == 3 for v in alive)


@lru_cache(maxsize=256)
def treewidth(G: Graph) -> int:
    """Exact treewidth by dynamic programming over vertex subsets.

    TW(S) = min over v in S of max(TW(S - v), |Q(S - v, v)|), where Q(S, v)
    holds the vertices outside S + v reachable from v through S.
    """
    n = G.n
    if n > TREEWIDTH_MAX_VERTICES:
        raise HostTooLarge(f"exact treewidth refuses more than {TREEWIDTH_MAX_VERTICES} vertices")
    if n == 0:
        return -1
    nbr = [sum(1 << y for y in G.adj[v]) for v in range(n)]
    full = (1 << n) - 1

    def q_size(S: int, v: int) -> int:
        seen = 1 << v
        frontier = 1 << v
        outside = 0
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            u = low.bit_length() - 1
            fresh = nbr[u] & ~seen
            seen |= fresh
            inside = fresh & S
            frontier |= inside
            outside |= fresh & ~S
        return bin(outside & full).count("1")

    tw = [0] * (1 << n)
    tw[0] = -1
    for S in range(1, 1 << n):
        best = n
        rest = S
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            prev = S ^ low
            cand = max(tw[prev], q_size(prev, v))
            if cand < best:
                best = cand
        tw[S] = best
    return tw[full]


@dataclass(frozen=True)
class StarReport:
    hypotheses_hold: bool
    conclusion_holds: bool
    three_connected: bool
    partial_3_tree: bool
    failed_leaves: tuple[int, ...] = field(default=())

    @property
    def violated(self) -> bool:
        return self.hypotheses_hold and not self.conclusion_holds


def check_star_theorem(G: Graph, w: int, leaves: list[int], *, strict: bool = False) -> StarReport:
    """Adding a star at w to a 3-connected partial 3-tree stays a partial 3-tree
    whenever each single star edge does."""
    pairs: list[VertexPair] = []
    for u in leaves:
        pair = as_pair((w, u))
        if pair.b >= G.n:
            raise PreconditionError(f"{pair} out of range")
        if G.has_edge(pair.a, pair.b):
            raise PreconditionError(f"{pair} is already an edge")
        pairs.append(pair)

    three_connected = G.n >= 4 and vertex_connectivity(G) >= 3
    p3t = is_partial_3_tree(G)
    failed = tuple(u for u, pair in zip(leaves, pairs) if not is_partial_3_tree(G.with_edges([pair])))
    hypotheses = three_connected and p3t and not failed
    conclusion = is_partial_3_tree(G.with_edges(pairs))
    report = StarReport(hypotheses, conclusion, three_connected, p3t, failed)
    if report.violated:
        logger.error("star at %d with leaves %s breaks the partial 3-tree property", w, leaves)
        if strict:
            raise InvariantViolation(f"star at {w} with leaves {leaves} is a counterexample")
    return report


def is_flattenable_via_sip(G: Graph, d: int) -> bool:
    """G is d-flattenable iff (G - e, e) has the d-SIP for every edge e."""
    from sip3.services.sip import decide_sip

    d = _check_dim(d)
    for comp in connected_components(G):
        piece = induced_subgraph(G, comp)
        for e in piece.edge_list():
            if not decide_sip(piece.without_edges([e]), e, d).answer:
                return False
    return True


@dataclass(frozen=True)
class ForbiddenMinorReport:
    d: int
    every_edge_fails_sip: bool
    every_minor_edge_has_sip: bool
    flattenable: bool
    minor_minimal: bool

    @property
    def is_forbidden_minor(self) -> bool:
        return not self.flattenable and self.minor_minimal


def _one_step_minors(G: Graph) -> list[Graph]:
    minors: list[Graph] = []
    for e in G.edge_list():
        minors.append(G.without_edges([e]))
        minors.append(contract_edge(G, e)[0])
    return minors


def forbidden_minor_conjecture_check(G: Graph, d: int) -> ForbiddenMinorReport:
    """Compares the SIP-based description of d-forbidden minors with the minor-minimality
    of G against flattenability."""
    from sip3.services.sip import decide_sip

    d = _check_dim(d)
    if not G.is_connected():
        raise PreconditionError("forbidden-minor check needs a connected graph")
    fails = all(not decide_sip(G.without_edges([e]), e, d).answer for e in G.edge_list())
    minors = _one_step_minors(G)
    minors_sip = all(is_flattenable_via_sip(M, d) for M in minors)
    flat = is_d_flattenable(G, d)
    minimal = all(is_d_flattenable(M, d) for M in minors)
    report = ForbiddenMinorReport(d, fails, minors_sip, flat, minimal)
    logger.info("forbidden-minor check d=%d n=%d: %s", d, G.n, report)
    return report
