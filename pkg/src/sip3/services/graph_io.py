"""Graph text format, linkage JSON and certificate JSON.

Graph text: '#' comments, blank lines ignored, one header `n <count>`, then
`e <u> <v>` lines with 0-based ids in any order.
"""

from __future__ import annotations

import json
from pathlib import Path

from pydantic import ValidationError

from sip3.core.errors import GraphError, GraphFormatError, LinkageError, Sip3Error
from sip3.models.certificate import Certificate
from sip3.models.graph import Graph, VertexPair, build_graph
from sip3.models.linkage import Linkage
from sip3.models.schemas import CertificateIn, EdgeLength, GraphIn, LinkageIn


def parse_graph(text: str) -> Graph:
    n: int | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "n" and len(parts) == 2:
                if n is not None:
                    raise GraphFormatError("second header line", line=lineno)
                n = int(parts[1])
                if n < 0:
                    raise GraphFormatError("vertex count must be non-negative", line=lineno)
                continue
            if parts[0] == "e" and len(parts) == 3:
                if n is None:
                    raise GraphFormatError("edge before the `n` header", line=lineno)
                u, v = int(parts[1]), int(parts[2])
            else:
                raise GraphFormatError(f"cannot parse {line!r}", line=lineno)
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(f"bad integer in {line!r}", line=lineno) from None
        if u == v:
            raise GraphFormatError(f"self-loop at {u}", line=lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"id out of range in {line!r} (n={n})", line=lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key[0]},{key[1]}", line=lineno)
        seen.add(key)
        edges.append(key)
    if n is None:
        raise GraphFormatError("missing `n <count>` header")
    return build_graph(n, edges)


def emit_graph(G: Graph, *, comment: str | None = None) -> str:
    lines = [f"# {comment}"] if comment else []
    lines.append(f"n {G.n}")
    lines.extend(f"e {u} {v}" for u, v in G.edge_list())
    return "\n".join(lines) + "\n"


def _read(path: str | Path, error: type[Sip3Error]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise error(f"cannot read {path}: {exc.strerror or exc}") from None


def read_graph(path: str | Path) -> Graph:
    return parse_graph(_read(path, GraphFormatError))


def graph_from_model(m: GraphIn) -> Graph:
    return build_graph(m.n, m.edges)


def linkage_from_model(m: LinkageIn) -> Linkage:
    try:
        G = build_graph(m.n, [(e.u, e.v) for e in m.edges])
    except GraphError as exc:
        raise LinkageError(str(exc)) from None
    return Linkage(G, {(min(e.u, e.v), max(e.u, e.v)): e.len2 for e in m.edges})


def parse_linkage(text: str) -> Linkage:
    try:
        model = LinkageIn.model_validate_json(text)
    except ValidationError as exc:
        raise LinkageError(f"invalid linkage JSON: {exc.errors()[0]['msg']}") from None
    return linkage_from_model(model)


def linkage_to_model(L: Linkage) -> LinkageIn:
    return LinkageIn(n=L.graph.n, edges=[EdgeLength(u=u, v=v, len2=val) for (u, v), val in L.len2.items()])


def emit_linkage(L: Linkage) -> str:
    return linkage_to_model(L).model_dump_json(indent=2) + "\n"


def read_linkage(path: str | Path) -> Linkage:
    return parse_linkage(_read(path, LinkageError))


def emit_certificate(c: Certificate) -> str:
    base = linkage_to_model(c.linkage).model_dump()
    model = CertificateIn(
        **base,
        f=(c.f.a, c.f.b),
        claimed_values=[tuple(v) for v in c.values],
        kind=c.kind,
        notes=list(c.notes),
    )
    return model.model_dump_json(indent=2) + "\n"


def parse_certificate(text: str) -> Certificate:
    try:
        model = CertificateIn.model_validate_json(text)
    except ValidationError as exc:
        raise LinkageError(f"invalid certificate JSON: {exc.errors()[0]['msg']}") from None
    if len(model.claimed_values) != 2:
        raise LinkageError("certificate JSON needs exactly two claimed_values")
    v1, v2 = model.claimed_values
    return Certificate(
        linkage_from_model(model),
        VertexPair(*model.f),
        (v1, v2),
        model.kind,
        notes=tuple(model.notes),
    )


def read_certificate(path: str | Path) -> Certificate:
    return parse_certificate(_read(path, LinkageError))


def write_text(path: str | Path, text: str) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")
    return p


def dumps(obj: object) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)
