from __future__ import annotations

import os

from pydantic_settings import BaseSettings, SettingsConfigDict

from sip3.core.errors import ConfigError


class Settings(BaseSettings):
    # 本地可用 .env / .env.local 调整预算与容差；变量统一使用 SIP3_ 前缀。
    # NOTE: tests set PYTEST_RUNNING=1 to avoid reading local .env/.env.local.
    model_config = SettingsConfigDict(
        env_prefix="SIP3_",
        env_file=None if os.environ.get("PYTEST_RUNNING") else (".env", ".env.local"),
        env_file_encoding="utf-8",
        extra="ignore",
    )

    env: str = "dev"
    app_name: str = "sip3"

    # Minor search: node budget, exceeding it is an error (never a silent "no").
    budget: int = 10_000_000
    # classify_edge / is_minimal_pair refuse larger hosts unless overridden per call.
    max_exhaustive_vertices: int = 12

    # Linkage numerics
    restarts: int = 200
    residual_tol: float = 1e-8
    cluster_gap: float = 1e-3
    probe_restarts: int = 12
    seed: int = 7
    workers: int = 1

    log_level: str = "WARNING"

    # 开发环境允许跨域的前端地址；环境变量用 JSON 列表，例如 SIP3_CORS_ORIGINS='["http://localhost:5173"]'
    cors_origins: list[str] = ["null", "http://127.0.0.1:5500", "http://localhost:5500"]


def _validate_settings(s: Settings) -> None:
    problems: list[str] = []
    if int(s.budget) <= 0:
        problems.append("SIP3_BUDGET")
    if int(s.max_exhaustive_vertices) <= 0:
        problems.append("SIP3_MAX_EXHAUSTIVE_VERTICES")
    if int(s.restarts) <= 0:
        problems.append("SIP3_RESTARTS")
    if int(s.probe_restarts) <= 0:
        problems.append("SIP3_PROBE_RESTARTS")
    if not float(s.residual_tol) > 0:
        problems.append("SIP3_RESIDUAL_TOL")
    if not float(s.cluster_gap) > 0:
        problems.append("SIP3_CLUSTER_GAP")
    if int(s.workers) <= 0:
        problems.append("SIP3_WORKERS")
    if problems:
        raise ConfigError("配置必须为正数：" + ", ".join(problems))


def get_settings() -> Settings:
    # 与 pydantic-settings 的 env_file 并用：python-dotenv 只注入“非空值”，
    # 避免 .env 中的空占位符（例如 SIP3_BUDGET=）导致解析失败。
    # pytest 下不注入 dotenv 文件，保证测试不受本机 .env.local 影响。
    try:
        if not os.environ.get("PYTEST_RUNNING"):
            from dotenv import dotenv_values

            def _inject_non_empty(path: str, *, allow_override_empty: bool) -> None:
                vals = dotenv_values(path)
                for k, v in (vals or {}).items():
                    if k is None or v is None:
                        continue
                    vv = str(v)
                    if not vv.strip():
                        continue
                    cur = os.environ.get(k)
                    if cur is None:
                        os.environ[k] = vv
                    elif allow_override_empty and str(cur).strip() == "":
                        os.environ[k] = vv

            _inject_non_empty(".env", allow_override_empty=False)
            _inject_non_empty(".env.local", allow_override_empty=True)
    except Exception:
        pass

    settings = Settings()
    _validate_settings(settings)
    return settings
