from __future__ import annotations

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from sip3.core.config import get_settings
from sip3.routers import analysis, geometry, system


def create_app() -> FastAPI:
    settings = get_settings()

    app = FastAPI(title=settings.app_name)

    # 开发环境：允许本机前端跨域调用
    if settings.env == "dev":
        app.add_middleware(
            CORSMiddleware,
            allow_origins=settings.cors_origins,
            allow_credentials=False,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    app.include_router(system.router)
    app.include_router(analysis.router)
    app.include_router(geometry.router)

    return app


app = create_app()
