"""日志用的紧凑摘要辅助函数"""

from __future__ import annotations

import math
from typing import Any

from .eos import StiffenedGasParams


def format_quantity(value: Any, unit: str = "", digits: int = 6) -> str:
    try:
        number = float(value)
    except (TypeError, ValueError):
        return str(value)
    if math.isnan(number):
        return "nan"
    text = f"{number:.{digits}g}"
    return f"{text} {unit}" if unit else text


def summarize_params(params: StiffenedGasParams | None) -> dict[str, str]:
    if not isinstance(params, StiffenedGasParams):
        return {}
    return {
        "gamma": format_quantity(params.gamma),
        "pi": format_quantity(params.pi, "Pa"),
        "C": format_quantity(params.C, "J/(kg K)"),
        "q": format_quantity(params.q, "J/kg"),
        "q_prime": format_quantity(params.q_prime, "J/(kg K)"),
    }


def summarize_theorem_report(report: Any) -> dict[str, Any]:
    sweep = getattr(report, "sweep", None)
    if not isinstance(sweep, tuple):
        return {}
    counted = [sample for sample in sweep if not sample.excluded]
    worst = min(counted, key=lambda sample: sample.margin, default=None)
    return {
        "mode": getattr(report, "mode", ""),
        "samples": len(sweep),
        "excluded": len(sweep) - len(counted),
        "all_strict": bool(getattr(report, "all_strict", False)),
        "min_margin": format_quantity(getattr(report, "min_margin", float("nan")), "K/Pa"),
        "worst_T": format_quantity(worst.T, "K") if worst else "",
    }


def summarize_intersection(report: Any) -> dict[str, Any]:
    if report is None:
        return {}
    point = getattr(report, "point", None)
    return {
        "found": bool(getattr(report, "found", False)),
        "point": [format_quantity(point[0], "Pa"), format_quantity(point[1], "K")] if point else None,
        "crossings": len(getattr(report, "crossings", ()) or ()),
        "min_signed_distance": format_quantity(
            getattr(report, "min_signed_distance", float("nan")), "K"
        ),
    }


def summarize_riemann_solution(solution: Any) -> dict[str, Any]:
    if solution is None:
        return {}
    return {
        "p_star": format_quantity(solution.p_star, "Pa"),
        "u_star": format_quantity(solution.u_star, "m/s"),
        "waves": [solution.left_wave.kind, solution.right_wave.kind],
        "iterations": solution.iterations,
    }
