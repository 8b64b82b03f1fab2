from __future__ import annotations

from fastapi import APIRouter

from sip3.models.minor import MinorConstraints
from sip3.models.schemas import (
    AtomsOut,
    EdgeTypeQuery,
    FlattenQuery,
    GraphIn,
    MinorOut,
    MinorQuery,
    PairQuery,
    SipOut,
    WingedQuery,
)
from sip3.routers.deps import domain_errors, graph_of
from sip3.services import reports
from sip3.services.decomposition import decompose_atoms
from sip3.services.flattenability import is_d_flattenable, is_partial_3_tree
from sip3.services.minors import find_rooted_minor
from sip3.services.patterns import catalog
from sip3.services.sip import classify_edge, decide_sip, find_winged_minor, is_minimal_pair

router = APIRouter(prefix="/analysis", tags=["analysis"])


@router.post("/atoms", response_model=AtomsOut)
def atoms(body: GraphIn):
    G = graph_of(body)
    with domain_errors():
        return reports.atoms_out(decompose_atoms(G))


@router.post("/flatten")
def flatten(body: FlattenQuery):
    G = graph_of(body)
    with domain_errors():
        return {"d": body.dim, "flattenable": is_d_flattenable(G, body.dim)}


@router.post("/p3t")
def partial_3_tree(body: GraphIn):
    G = graph_of(body)
    with domain_errors():
        return {"partial_3_tree": is_partial_3_tree(G)}


@router.post("/sip", response_model=SipOut)
def sip(body: PairQuery):
    G = graph_of(body)
    with domain_errors():
        return reports.sip_out(decide_sip(G, body.nonedge, body.dim))


@router.post("/edge-type")
def edge_type(body: EdgeTypeQuery):
    G = graph_of(body)
    with domain_errors():
        kind = classify_edge(G, body.nonedge, body.edge)
    return {"type": int(kind), "name": kind.name.lower()}


@router.post("/minimal")
def minimal(body: PairQuery):
    G = graph_of(body)
    with domain_errors():
        return {"minimal": is_minimal_pair(G, body.nonedge)}


@router.post("/winged", response_model=MinorOut | None)
def winged(body: WingedQuery):
    G = graph_of(body)
    with domain_errors():
        found = find_winged_minor(G, body.edge)
    return reports.minor_out(found) if found is not None else None


@router.post("/minor", response_model=MinorOut | None)
def minor(body: MinorQuery):
    G = graph_of(body)
    with domain_errors():
        constraints = MinorConstraints(
            pins=tuple(body.pins),
            preserve=tuple(body.preserve),
            retain=tuple(body.retain),
            induced=body.induced,
        )
        found = find_rooted_minor(G, catalog().by_name(body.pattern), constraints)
    return reports.minor_out(found) if found is not None else None
