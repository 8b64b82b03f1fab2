from __future__ import annotations

from fastapi import APIRouter

from sip3.core.config import get_settings
from sip3.models.schemas import CcsQuery, CertificateCheckOut, CertificateIn, CertifyQuery, IntervalsOut
from sip3.routers.deps import domain_errors, graph_of
from sip3.services import reports
from sip3.services.certificates import build_certificate, check_certificate
from sip3.services.graph_io import emit_certificate, linkage_from_model, parse_certificate
from sip3.services.linkage_numerics import ccs_intervals

router = APIRouter(prefix="/geometry", tags=["geometry"])

DEFAULT_SAMPLES = 1000


@router.post("/ccs", response_model=IntervalsOut)
def ccs(body: CcsQuery):
    with domain_errors():
        L = linkage_from_model(body)
        seed = body.seed if body.seed is not None else get_settings().seed
        result = ccs_intervals(L, body.nonedge, body.dim, body.samples or DEFAULT_SAMPLES, seed, body.gap)
    return reports.intervals_out(result)


@router.post("/certify", response_model=CertificateIn | None)
def certify(body: CertifyQuery):
    G = graph_of(body)
    with domain_errors():
        cert = build_certificate(G, body.nonedge)
    if cert is None:
        return None
    return CertificateIn.model_validate_json(emit_certificate(cert))


@router.post("/verify", response_model=CertificateCheckOut)
def verify(body: CertificateIn, samples: int = DEFAULT_SAMPLES, seed: int | None = None):
    with domain_errors():
        cert = parse_certificate(body.model_dump_json())
        check = check_certificate(cert, samples=samples, seed=seed if seed is not None else get_settings().seed)
    return reports.check_out(check)
