from __future__ import annotations

from fastapi import APIRouter

from sip3 import __version__
from sip3.core.config import get_settings

router = APIRouter(prefix="/system", tags=["system"])


@router.get("/health")
def health():
    return {"status": "ok"}


@router.get("/info")
def info():
    s = get_settings()
    return {
        "version": __version__,
        "app_name": s.app_name,
        "env": s.env,
        "budget": s.budget,
        "max_exhaustive_vertices": s.max_exhaustive_vertices,
        "restarts": s.restarts,
        "residual_tol": s.residual_tol,
        "cluster_gap": s.cluster_gap,
        "seed": s.seed,
        "workers": s.workers,
    }
