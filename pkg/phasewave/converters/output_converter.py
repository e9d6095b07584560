"""输出转换器 - 将计算结果渲染为 CSV 或 JSON 文本

CSV 浮点数统一用 17 位有效数字，JSON 使用 Python 的最短往返表示，
两者都能无损还原 64 位浮点值。相同输入总是得到逐字节相同的输出。
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import asdict, is_dataclass
from typing import Any

import numpy as np

from ..core.eos import params_to_dict
from ..core.errors import ConfigError
from ..core.riemann import JumpResiduals, RiemannInput, RiemannProfile, RiemannSolution
from ..core.saturation import SaturationCurve
from ..core.steamtable import LocalFit
from ..core.waves import IntersectionReport, WaveCurve
from ..services.analysis import CavitationReport, MassFractionBound, TheoremReport

SATCURVE_HEADER = ("T_K", "p_sat_Pa", "dTsat_dp_K_per_Pa", "rho_V", "rho_L", "s_V", "s_L")
WAVECURVE_HEADER = ("p_Pa", "T_K", "rho_kg_m3", "kind")
FIT_HEADER = ("T_K", "phase", "gamma", "pi_Pa", "C", "q", "q_prime")
PROFILE_HEADER = ("xi", "rho", "u", "p", "T")
THEOREM_HEADER = (
    "T_K",
    "p_Pa",
    "slope_wave_K_per_Pa",
    "slope_sat_K_per_Pa",
    "margin_K_per_Pa",
    "near_critical",
    "excluded",
)

FORMATS = ("csv", "json")


def format_float(value: Any) -> str:
    return format(float(value), ".17g")


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def _json_value(value: Any) -> Any:
    if is_dataclass(value) and not isinstance(value, type):
        return {key: _json_value(item) for key, item in asdict(value).items()}
    if isinstance(value, dict):
        return {str(key): _json_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(item) for item in value]
    if isinstance(value, np.ndarray):
        return [_json_value(item) for item in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return number if math.isfinite(number) else None
    return value


class OutputConverter:
    """输出转换器 - 按 csv/json 格式渲染各命令的结果"""

    def __init__(self, fmt: str = "csv"):
        normalized = str(fmt or "csv").strip().lower()
        if normalized not in FORMATS:
            raise ConfigError("未知的输出格式", format=fmt, available=list(FORMATS))
        self.format = normalized

    def to_csv(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(_cell(value) for value in row)
        return buffer.getvalue()

    def to_json(self, payload: Any) -> str:
        return json.dumps(_json_value(payload), ensure_ascii=False, indent=2, allow_nan=False) + "\n"

    def render_saturation_curve(self, curve: SaturationCurve) -> str:
        if self.format == "json":
            return self.to_json(
                [
                    {
                        "T": point.T,
                        "p_sat": point.p_sat,
                        "slope_dT_dp": point.slope_dT_dp,
                        "near_critical": point.near_critical,
                        "vapor": point.vapor,
                        "liquid": point.liquid,
                    }
                    for point in curve.points
                ]
            )
        return self.to_csv(
            SATCURVE_HEADER,
            (
                (
                    point.T,
                    point.p_sat,
                    point.slope_dT_dp,
                    point.vapor.rho,
                    point.liquid.rho,
                    point.vapor.s,
                    point.liquid.s,
                )
                for point in curve.points
            ),
        )

    def intersection_payload(self, report: IntersectionReport | None) -> dict[str, Any] | None:
        if report is None:
            return None
        return {
            "found": report.found,
            "point": list(report.point) if report.point else None,
            "min_signed_distance": report.min_signed_distance,
            "slope_curve": report.slope_curve,
            "slope_sat": report.slope_sat,
            "crossings": [list(c) for c in report.crossings],
            "samples": report.samples,
        }

    def render_wave_curve(self, curve: WaveCurve, report: IntersectionReport | None = None) -> str:
        if self.format == "json":
            return self.to_json(
                {
                    "kind": curve.kind,
                    "anchor": list(curve.anchor),
                    "params": params_to_dict(curve.params),
                    "samples": [
                        {"p": p, "T": T, "rho": rho} for p, T, rho in curve.samples
                    ],
                    "intersection": self.intersection_payload(report),
                }
            )
        return self.to_csv(
            WAVECURVE_HEADER, ((p, T, rho, curve.kind) for p, T, rho in curve.samples)
        )

    def render_fits(self, fits: Sequence[LocalFit]) -> str:
        if self.format == "json":
            return self.to_json(
                [
                    {
                        "T": fit.T_anchor,
                        "p_sat": fit.p_anchor,
                        "vapor": params_to_dict(fit.vapor),
                        "liquid": params_to_dict(fit.liquid),
                        "pi_liquid_negative": fit.pi_liquid_negative,
                        "near_critical": fit.near_critical,
                    }
                    for fit in fits
                ]
            )
        rows: list[tuple[Any, ...]] = []
        for fit in fits:
            for phase, params in (("vapor", fit.vapor), ("liquid", fit.liquid)):
                rows.append(
                    (fit.T_anchor, phase, params.gamma, params.pi, params.C, params.q, params.q_prime)
                )
        return self.to_csv(FIT_HEADER, rows)

    def cavitation_payload(self, report: CavitationReport) -> dict[str, Any]:
        return {
            "initial": list(report.initial),
            "kind": report.kind,
            "saturation_hit": list(report.saturation_hit) if report.saturation_hit else None,
            "mu_max": report.mu_max,
            "intersection": self.intersection_payload(report.intersection),
        }

    def render_verification(
        self,
        reports: Sequence[TheoremReport],
        extras: dict[str, Any] | None = None,
    ) -> str:
        """verify 命令的汇总；CSV 只包含各扫描样本"""
        if self.format == "csv":
            rows: list[tuple[Any, ...]] = []
            for report in reports:
                for s in report.sweep:
                    rows.append(
                        (report.mode, s.T, s.p, s.slope_wave, s.slope_sat, s.margin, s.near_critical, s.excluded)
                    )
            return self.to_csv(("mode",) + THEOREM_HEADER, rows)
        payload: dict[str, Any] = {
            "all_strict": all(report.all_strict for report in reports),
            "reports": [
                {
                    "mode": report.mode,
                    "all_strict": report.all_strict,
                    "min_margin": report.min_margin,
                    "sign_conditions_hold": report.sign_conditions_hold,
                    "excluded": report.excluded_count,
                    "samples": len(report.sweep),
                }
                for report in reports
            ],
        }
        for key, value in (extras or {}).items():
            if isinstance(value, MassFractionBound):
                payload[key] = asdict(value)
            elif isinstance(value, CavitationReport):
                payload[key] = self.cavitation_payload(value)
            elif isinstance(value, list) and all(isinstance(item, CavitationReport) for item in value):
                payload[key] = [self.cavitation_payload(item) for item in value]
            else:
                payload[key] = value
        return self.to_json(payload)

    def riemann_payload(
        self,
        solution: RiemannSolution,
        problem: RiemannInput,
        temperatures: tuple[float, float],
        residuals: Sequence[JumpResiduals] = (),
    ) -> dict[str, Any]:
        return {
            "params": params_to_dict(problem.params),
            "left": problem.left,
            "right": problem.right,
            "p_star": solution.p_star,
            "u_star": solution.u_star,
            "rho_star_left": solution.rho_star_left,
            "rho_star_right": solution.rho_star_right,
            "T_star_left": temperatures[0],
            "T_star_right": temperatures[1],
            "contact_speed": solution.contact_speed,
            "left_wave": solution.left_wave,
            "right_wave": solution.right_wave,
            "iterations": solution.iterations,
            "residual": solution.residual,
            "rankine_hugoniot": list(residuals),
        }

    def render_riemann(self, payload: dict[str, Any]) -> str:
        return self.to_json(payload)

    def render_profile(self, profile: RiemannProfile) -> str:
        return self.to_csv(
            PROFILE_HEADER,
            zip(profile.xi, profile.rho, profile.u, profile.p, profile.T, strict=True),
        )
