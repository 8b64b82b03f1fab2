"""d-SIP decider for graph-nonedge pairs (d <= 3), convexity, edge types and
minimal pairs."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable

from sip3.core.config import get_settings
from sip3.core.errors import HostTooLarge, InvariantViolation, PreconditionError
from sip3.models.graph import Graph, PairLike, VertexPair, as_pair, complete_graph
from sip3.models.minor import MinorConstraints, MinorMap
from sip3.services.decomposition import atoms_of, decompose_atoms, is_atom
from sip3.services.graph_core import induced_subgraph
from sip3.services.minors import contract_edge, find_preserving_forbidden_minor, find_rooted_minor
from sip3.services.patterns import catalog

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SipVerdict:
    answer: bool
    d: int
    f: VertexPair
    # host of the witness is the offending atom subgraph; its labels are ids of G ∪ f
    witness: MinorMap | None = None
    atom: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.answer


class EdgeType(IntEnum):
    NO_FORBIDDEN_MINOR = 1
    OUTSIDE_ATOMS = 2
    DOUBLED = 3
    REDUCING = 4


def _check_dim(d: int, allowed: tuple[int, ...] = (1, 2, 3)) -> int:
    if d not in allowed:
        raise PreconditionError(f"dimension must be one of {allowed}, got {d}")
    return int(d)


def _check_nonedge(G: Graph, f: PairLike) -> VertexPair:
    pair = as_pair(f)
    if pair.b >= G.n:
        raise PreconditionError(f"pair {pair} out of range for n={G.n}")
    if G.has_edge(pair.a, pair.b):
        raise PreconditionError(f"{pair} is already an edge")
    return pair


def _local_pair(atom: Graph, pair: VertexPair) -> VertexPair:
    return VertexPair(atom.local(pair.a), atom.local(pair.b))


def _atom_witness(atom: Graph, pair: VertexPair, d: int) -> MinorMap | None:
    local = _local_pair(atom, pair)
    if d == 3:
        return find_preserving_forbidden_minor(atom, local)
    pattern = complete_graph(d + 2)
    preserving = find_rooted_minor(atom, pattern, MinorConstraints(preserve=(local,)))
    # in an atom any K3 / K4 minor can be rerouted to keep f
    if preserving is None and find_rooted_minor(atom, pattern) is not None:
        logger.error("atom %s has a K%d minor but none preserving %s", atom.labels, d + 2, local)
        raise InvariantViolation(f"atom has a K{d + 2} minor but none preserving {local}")
    return preserving


def decide_sip(G: Graph, f: PairLike, d: int) -> SipVerdict:
    """(G, f) has the d-SIP iff no atom of G ∪ f containing f has an f-preserving
    d-forbidden minor."""
    d = _check_dim(d)
    pair = _check_nonedge(G, f)
    H = G.with_edges([pair])
    if not H.is_connected():
        raise PreconditionError("G ∪ f must be connected")
    dec = decompose_atoms(H)
    for atom_vs in dec.atoms_containing(pair):
        atom = induced_subgraph(H, atom_vs)
        witness = _atom_witness(atom, pair, d)
        if witness is not None:
            logger.info("(G, %s) is not %d-SIP: atom %s", pair, d, atom_vs)
            return SipVerdict(False, d, pair, witness, atom_vs)
    logger.info("(G, %s) has the %d-SIP", pair, d)
    return SipVerdict(True, d, pair)


def _check_family(G: Graph, F: Iterable[PairLike]) -> list[VertexPair]:
    pairs: list[VertexPair] = []
    for f in F:
        pair = _check_nonedge(G, f)
        if pair in pairs:
            raise PreconditionError(f"{pair} listed twice")
        pairs.append(pair)
    return pairs


def decide_convexity(G: Graph, F: Iterable[PairLike], d: int) -> bool:
    """(G, F) is d-convex (d <= 2) iff every atom of G ∪ F meeting F has no K_{d+2} minor."""
    d = _check_dim(d, (1, 2))
    pairs = _check_family(G, F)
    H = G.with_edges(pairs)
    pattern = complete_graph(d + 2)
    for atom_vs in atoms_of(H):
        vs = set(atom_vs)
        if not any(p.a in vs and p.b in vs for p in pairs):
            continue
        atom = induced_subgraph(H, atom_vs)
        if atom.n >= pattern.n and find_rooted_minor(atom, pattern) is not None:
            logger.info("(G, F) is not %d-convex: atom %s", d, atom_vs)
            return False
    return True


def sufficient_convexity_3(G: Graph, F: Iterable[PairLike]) -> bool | None:
    """True when G ∪ F is 3-flattenable; None means no verdict."""
    from sip3.services.flattenability import is_d_flattenable

    pairs = _check_family(G, F)
    return True if is_d_flattenable(G.with_edges(pairs), 3) else None


@dataclass(frozen=True)
class ConvexityConjectureReport:
    per_pair: tuple[tuple[VertexPair, bool], ...]
    sufficient: bool | None

    @property
    def conjectured_convex(self) -> bool:
        return all(ok for _, ok in self.per_pair)


def convexity_conjecture_check(G: Graph, F: Iterable[PairLike]) -> ConvexityConjectureReport:
    pairs = _check_family(G, F)
    rows = []
    for pair in pairs:
        others = [p for p in pairs if p != pair]
        rows.append((pair, decide_sip(G.with_edges(others), pair, 3).answer))
    return ConvexityConjectureReport(tuple(rows), sufficient_convexity_3(G, pairs))


def _exhaustive_limit(G: Graph, max_vertices: int | None) -> None:
    limit = max_vertices if max_vertices is not None else get_settings().max_exhaustive_vertices
    if G.n > limit:
        raise HostTooLarge(f"refusing a host with {G.n} vertices (limit {limit})")


def classify_edge(G: Graph, f: PairLike, e: PairLike, *, max_vertices: int | None = None) -> EdgeType:
    pair = _check_nonedge(G, f)
    edge = as_pair(e)
    if not G.has_edge(edge.a, edge.b):
        raise PreconditionError(f"{edge} is not an edge")
    _exhaustive_limit(G, max_vertices)
    H = G.with_edges([pair])
    if not H.is_connected():
        raise PreconditionError("G ∪ f must be connected")

    Hc, mapping = contract_edge(H, edge)
    fc = VertexPair(mapping[pair.a], mapping[pair.b])
    if find_preserving_forbidden_minor(Hc, fc) is None:
        return EdgeType.NO_FORBIDDEN_MINOR
    in_atom = False
    for atom_vs in decompose_atoms(Hc).atoms_containing(fc):
        atom = induced_subgraph(Hc, atom_vs)
        if find_preserving_forbidden_minor(atom, _local_pair(atom, fc)) is not None:
            in_atom = True
            break
    if not in_atom:
        return EdgeType.OUTSIDE_ATOMS
    # the contraction as a minor map of G ∪ f onto [G ∪ f]
    if MinorMap(H, Hc, mapping).is_doubled(pair):
        return EdgeType.DOUBLED
    return EdgeType.REDUCING


def is_minimal_pair(G: Graph, f: PairLike, *, max_vertices: int | None = None) -> bool:
    pair = _check_nonedge(G, f)
    _exhaustive_limit(G, max_vertices)
    H = G.with_edges([pair])
    if not H.is_connected() or not is_atom(H):
        return False
    if find_preserving_forbidden_minor(H, pair) is None:
        return False
    for e in G.edge_list():
        if classify_edge(G, pair, e, max_vertices=max_vertices) is EdgeType.REDUCING:
            logger.debug("(G, %s) has reducing edge %s", pair, e)
            return False
    return True


def find_winged_minor(G: Graph, f: PairLike) -> MinorMap | None:
    """A winged-K5 or winged-K2,2,2 minor with the endpoints of f on the wing edge."""
    pair = as_pair(f)
    if pair.b >= G.n or not G.has_edge(pair.a, pair.b):
        raise PreconditionError(f"{pair} must be an edge")
    cat = catalog()
    for pattern in (cat.winged_k5, cat.winged_k222):
        if G.n < pattern.n:
            continue
        for a, b in ((pair.a, pair.b), (pair.b, pair.a)):
            m = find_rooted_minor(G, pattern, MinorConstraints(pins=((a, 0), (b, 1))))
            if m is not None:
                return m
    return None
