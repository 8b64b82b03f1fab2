from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field as PydField


class EdgeLength(BaseModel):
    u: int = PydField(ge=0)
    v: int = PydField(ge=0)
    len2: float


class LinkageIn(BaseModel):
    n: int = PydField(ge=0)
    edges: list[EdgeLength] = []


class CertificateIn(LinkageIn):
    f: tuple[int, int]
    claimed_values: list[tuple[float, float]]
    kind: str = "external"
    notes: list[str] = []


class GraphIn(BaseModel):
    n: int = PydField(ge=0)
    edges: list[tuple[int, int]] = []


class PairQuery(GraphIn):
    nonedge: tuple[int, int]
    dim: int = PydField(default=3, ge=1, le=3)


class EdgeTypeQuery(GraphIn):
    nonedge: tuple[int, int]
    edge: tuple[int, int]


class WingedQuery(GraphIn):
    edge: tuple[int, int]


class FlattenQuery(GraphIn):
    dim: int = PydField(default=3, ge=1, le=3)


class MinorQuery(GraphIn):
    pattern: str = "k5"
    preserve: list[tuple[int, int]] = []
    retain: list[tuple[int, int]] = []
    pins: list[tuple[int, int]] = []
    induced: bool = False


class CcsQuery(LinkageIn):
    nonedge: tuple[int, int]
    dim: int = PydField(default=3, ge=1)
    samples: Optional[int] = PydField(default=None, ge=1, le=20000)
    seed: Optional[int] = None
    gap: Optional[float] = PydField(default=None, gt=0)


class CertifyQuery(GraphIn):
    nonedge: tuple[int, int]


class MinorOut(BaseModel):
    pattern_n: int
    branch_sets: dict[int, list[int]]


class SipOut(BaseModel):
    answer: bool
    d: int
    nonedge: tuple[int, int]
    atom: Optional[list[int]] = None
    witness: Optional[MinorOut] = None


class AtomsOut(BaseModel):
    atoms: list[list[int]]
    cms: list[list[int]]
    atom_graph_edges: list[tuple[str, str]]


class IntervalsOut(BaseModel):
    intervals: list[tuple[float, float]]
    provenance: str
    verdict: str
    text: str


class CertificateCheckOut(BaseModel):
    ok: bool
    positive: bool
    matched: bool
    clusters: str
    reasons: list[str] = []
