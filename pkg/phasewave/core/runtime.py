"""求解器运行时配置桥接"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .errors import ConfigError
from .log import logger

TABLE_ENV_VAR = "PHASEWAVE_TABLE"

T_TRIPLE = 273.16
T_CRIT = 647.096
P_CRIT = 22.064e6

_runtime_config: dict[str, Any] | None = None


@dataclass(frozen=True, slots=True)
class SolverSettings:
    """数值求解设置，字段与 _conf_schema.json 中的 solver 一一对应"""

    tol_g: float = 1e-6
    max_iterations: int = 200
    bracket_p_min: float = 1.0
    bracket_p_max: float = 1e9
    t_min: float = T_TRIPLE
    t_max: float = T_CRIT
    near_critical_margin: float = 0.5
    intersection_samples: int = 2048
    strictness_rtol: float = 1e-15
    near_critical_exclusion: float = 645.0


DEFAULT_SETTINGS = SolverSettings()


def register_runtime_config(config: dict[str, Any] | None) -> None:
    global _runtime_config
    _runtime_config = config if isinstance(config, dict) else None


def clear_runtime_config() -> None:
    global _runtime_config
    _runtime_config = None


def get_runtime_config() -> dict[str, Any] | None:
    return _runtime_config


def load_runtime_config(path: str | os.PathLike[str]) -> dict[str, Any]:
    """读取 JSON 配置文件并注册"""
    try:
        config = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ConfigError("配置文件不存在", path=str(path)) from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"配置文件不是合法 JSON: {e.msg}", path=str(path), line=e.lineno) from e
    if not isinstance(config, dict):
        raise ConfigError("配置文件顶层必须是 JSON 对象", path=str(path))
    register_runtime_config(config)
    return config


def _normalize_string(value: Any) -> str:
    return str(value or "").strip()


def _clamp_int(value: Any, default: int, minimum: int, maximum: int) -> int:
    try:
        normalized = int(value)
    except (TypeError, ValueError):
        normalized = default
    return max(minimum, min(normalized, maximum))


def _clamp_float(value: Any, default: float, minimum: float, maximum: float) -> float:
    try:
        normalized = float(value)
    except (TypeError, ValueError):
        normalized = default
    if normalized != normalized:
        normalized = default
    return max(minimum, min(normalized, maximum))


def _section(name: str) -> dict[str, Any]:
    config = _runtime_config if isinstance(_runtime_config, dict) else {}
    section = config.get(name, {})
    return section if isinstance(section, dict) else {}


def resolve_solver_settings() -> SolverSettings:
    solver = _section("solver")
    d = DEFAULT_SETTINGS

    t_min = _clamp_float(solver.get("t_min"), d.t_min, 1.0, 5000.0)
    t_max = _clamp_float(solver.get("t_max"), d.t_max, 1.0, 5000.0)
    if t_max <= t_min:
        logger.warning(f"[Runtime] 温度窗口无效 ({t_min}, {t_max})，回退到默认窗口")
        t_min, t_max = d.t_min, d.t_max

    p_lo = _clamp_float(solver.get("bracket_p_min"), d.bracket_p_min, 1e-6, 1e6)
    p_hi = _clamp_float(solver.get("bracket_p_max"), d.bracket_p_max, 1e5, 1e12)

    return SolverSettings(
        tol_g=_clamp_float(solver.get("tol_g"), d.tol_g, 1e-15, 1e-2),
        max_iterations=_clamp_int(solver.get("max_iterations"), d.max_iterations, 10, 10000),
        bracket_p_min=p_lo,
        bracket_p_max=max(p_hi, p_lo * 2.0),
        t_min=t_min,
        t_max=t_max,
        near_critical_margin=_clamp_float(
            solver.get("near_critical_margin"), d.near_critical_margin, 0.0, 50.0
        ),
        intersection_samples=_clamp_int(
            solver.get("intersection_samples"), d.intersection_samples, 16, 1_000_000
        ),
        strictness_rtol=_clamp_float(solver.get("strictness_rtol"), d.strictness_rtol, 0.0, 1e-3),
        near_critical_exclusion=_clamp_float(
            solver.get("near_critical_exclusion"), d.near_critical_exclusion, 1.0, 5000.0
        ),
    )


def resolve_table_path(explicit: str | None = None) -> str | None:
    """按 显式参数 -> 环境变量 -> 配置 的顺序解析蒸汽表路径"""
    for candidate in (
        _normalize_string(explicit),
        _normalize_string(os.environ.get(TABLE_ENV_VAR)),
        _normalize_string(_section("paths").get("table")),
    ):
        if candidate:
            return candidate
    return None
