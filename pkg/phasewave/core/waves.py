"""(p,T)/(p,rho) 相平面中的激波（Hugoniot）与稀疏波（等熵线）波曲线"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Protocol

import numpy as np
from numpy.typing import ArrayLike
from scipy import optimize

from .eos import StiffenedGasParams, density_from_pT
from .errors import DomainError, OutOfRangeError
from .log import logger
from .runtime import SolverSettings, resolve_solver_settings
from .saturation import SaturationCurve

__all__ = [
    "WaveKind",
    "WaveCurve",
    "WaveCurveLike",
    "IntersectionReport",
    "hugoniot_density_ratio",
    "hugoniot_temperature",
    "admissible_initial_curve",
    "admissible_initial_slope",
    "isentrope_temperature",
    "isentrope_temperature_general",
    "isentrope_slope",
    "shock_curve",
    "rarefaction_curve",
    "intersect_saturation",
]

# |T_curve - T_sat| 低于该相对量视为落在饱和线上
ON_LINE_RTOL = 1e-9


class WaveKind:
    """波类型常量"""

    SHOCK = "shock"
    RAREFACTION = "rarefaction"


def _check_offset(params: StiffenedGasParams, p: ArrayLike, name: str) -> None:
    if not np.all(np.add(p, params.pi) > 0.0):
        raise DomainError(f"要求 {name} + pi > 0", **{name: p, "pi": params.pi})


def _hugoniot_terms(params: StiffenedGasParams, p_hat: ArrayLike, p_star: ArrayLike):
    g = params.gamma
    two_gamma_pi = 2.0 * g * params.pi
    numerator = np.multiply(p_star, g + 1.0) + np.multiply(p_hat, g - 1.0) + two_gamma_pi
    denominator = np.multiply(p_hat, g + 1.0) + np.multiply(p_star, g - 1.0) + two_gamma_pi
    if not np.all(denominator > 0.0) or not np.all(numerator > 0.0):
        raise DomainError("Hugoniot 关系分母非正", p_hat=p_hat, p_star=p_star)
    return numerator, denominator


def hugoniot_density_ratio(
    params: StiffenedGasParams,
    p_hat: ArrayLike,
    p_star: ArrayLike,
    allow_expansive: bool = False,
):
    """激波后与激波前密度比 rho_*/rho_hat

    分子分母同乘 p_hat (gamma+1) 后的形式，p_hat -> 0 时仍可计算。
    """
    _check_offset(params, p_hat, "p_hat")
    _check_offset(params, p_star, "p_star")
    if not allow_expansive and np.any(np.less(p_star, p_hat)):
        raise DomainError("压缩分支要求 p_star >= p_hat", p_hat=p_hat, p_star=p_star)
    numerator, denominator = _hugoniot_terms(params, p_hat, p_star)
    return numerator / denominator


def hugoniot_temperature(
    params: StiffenedGasParams,
    p_hat: ArrayLike,
    T_hat: ArrayLike,
    p_star: ArrayLike,
    allow_expansive: bool = False,
):
    """激波后温度 T_*

    T_hat/T_* = (p_hat+pi)/(p_*+pi) * rho_*/rho_hat，与密度关系和温度方程严格一致；
    pi = 0 时即标准理想气体形式。
    """
    if not np.all(np.asarray(T_hat) > 0.0):
        raise DomainError("要求 T_hat > 0", T_hat=T_hat)
    ratio = hugoniot_density_ratio(params, p_hat, p_star, allow_expansive=allow_expansive)
    return np.multiply(T_hat, np.add(p_star, params.pi) / np.add(p_hat, params.pi)) / ratio


def admissible_initial_curve(
    gamma_V: float,
    p_star: float,
    T_star: ArrayLike,
    p_hat: ArrayLike,
    allow_extension: bool = False,
):
    """能被激波连接到 (p_*, T_*) 的所有初始状态 T_hat(p_hat)，气相 pi = 0"""
    if gamma_V <= 1.0:
        raise DomainError("gamma_V 必须大于 1", gamma_V=gamma_V)
    if not (p_star > 0.0 and np.all(np.asarray(T_star) > 0.0) and np.all(np.asarray(p_hat) > 0.0)):
        raise DomainError("压力与温度必须为正", p_star=p_star, T_star=T_star, p_hat=p_hat)
    if not allow_extension and np.any(np.greater(p_hat, p_star)):
        raise DomainError("要求 p_hat <= p_star", p_hat=p_hat, p_star=p_star)
    g = gamma_V
    numerator = p_star * (g + 1.0) + np.multiply(p_hat, g - 1.0)
    denominator = np.multiply(p_hat, g + 1.0) + p_star * (g - 1.0)
    return np.multiply(T_star, np.divide(p_hat, p_star)) * numerator / denominator


def admissible_initial_slope(gamma_V: float, p_star: float, T_star: float) -> float:
    if gamma_V <= 1.0 or p_star <= 0.0 or T_star <= 0.0:
        raise DomainError("要求 gamma_V > 1 且 p_star、T_star 为正", gamma_V=gamma_V)
    return T_star / p_star * (gamma_V - 1.0) / gamma_V


def isentrope_temperature(gamma_V: float, p_star: float, T_star: float, p: ArrayLike):
    """pi = 0 相的等熵线 T(p) = T_* (p/p_*)^((gamma-1)/gamma)"""
    if gamma_V <= 1.0:
        raise DomainError("gamma_V 必须大于 1", gamma_V=gamma_V)
    if not (p_star > 0.0 and np.all(np.asarray(p) > 0.0)):
        raise DomainError("要求压力为正", p_star=p_star, p=p)
    return T_star * np.power(np.divide(p, p_star), (gamma_V - 1.0) / gamma_V)


def isentrope_temperature_general(
    params: StiffenedGasParams, p_hat: float, T_hat: float, p: ArrayLike
):
    """任意 pi 的等熵线 T(p) = T_hat ((p+pi)/(p_hat+pi))^((gamma-1)/gamma)"""
    _check_offset(params, p_hat, "p_hat")
    _check_offset(params, p, "p")
    if T_hat <= 0.0:
        raise DomainError("要求 T_hat > 0", T_hat=T_hat)
    exponent = (params.gamma - 1.0) / params.gamma
    return T_hat * np.power(np.add(p, params.pi) / (p_hat + params.pi), exponent)


def isentrope_slope(gamma_V: float, p_star: float, T_star: float) -> float:
    """气相等熵线在 (p_*, T_*) 处的斜率，与激波初态曲线斜率同形"""
    if gamma_V <= 1.0 or p_star <= 0.0 or T_star <= 0.0:
        raise DomainError("要求 gamma_V > 1 且 p_star、T_star 为正", gamma_V=gamma_V)
    return T_star / p_star * (gamma_V - 1.0) / gamma_V


class WaveCurveLike(Protocol):
    @property
    def pressure_range(self) -> tuple[float, float]: ...

    @property
    def anchor(self) -> tuple[float, float] | None: ...

    def temperature_at(self, p: ArrayLike) -> np.ndarray: ...


@dataclass(frozen=True, slots=True)
class WaveCurve:
    """从锚点 (p_hat, T_hat) 出发的单相波曲线

    shock 只取压缩分支 p >= p_hat，rarefaction 只取膨胀分支 p <= p_hat；
    曲线按需求值，samples 仅在导出时填充。
    """

    kind: str
    p_hat: float
    T_hat: float
    params: StiffenedGasParams
    p_end: float
    samples: tuple[tuple[float, float, float], ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in (WaveKind.SHOCK, WaveKind.RAREFACTION):
            raise DomainError("未知的波类型", kind=self.kind)
        _check_offset(self.params, self.p_hat, "p_hat")
        _check_offset(self.params, self.p_end, "p_end")
        if self.T_hat <= 0.0:
            raise DomainError("要求 T_hat > 0", T_hat=self.T_hat)
        if self.kind == WaveKind.SHOCK and self.p_end < self.p_hat:
            raise DomainError("激波曲线要求 p_end >= p_hat", p_hat=self.p_hat, p_end=self.p_end)
        if self.kind == WaveKind.RAREFACTION and self.p_end > self.p_hat:
            raise DomainError("稀疏波曲线要求 p_end <= p_hat", p_hat=self.p_hat, p_end=self.p_end)

    @property
    def anchor(self) -> tuple[float, float]:
        return self.p_hat, self.T_hat

    @property
    def pressure_range(self) -> tuple[float, float]:
        return min(self.p_hat, self.p_end), max(self.p_hat, self.p_end)

    def temperature_at(self, p: ArrayLike) -> np.ndarray:
        p = np.atleast_1d(np.asarray(p, dtype=float))
        if self.kind == WaveKind.SHOCK:
            return np.asarray(hugoniot_temperature(self.params, self.p_hat, self.T_hat, p))
        return np.asarray(isentrope_temperature_general(self.params, self.p_hat, self.T_hat, p))

    def density_at(self, p: ArrayLike) -> np.ndarray:
        p = np.atleast_1d(np.asarray(p, dtype=float))
        return np.asarray(density_from_pT(self.params, p, self.temperature_at(p)))

    def pressure_grid(self, n: int) -> np.ndarray:
        """从锚点到端点的压力网格；两端均为正时几何分布，否则线性分布"""
        if n < 2:
            raise DomainError("采样点数 n 必须 >= 2", n=n)
        if self.p_hat > 0.0 and self.p_end > 0.0:
            grid = np.geomspace(self.p_hat, self.p_end, n)
        else:
            grid = np.linspace(self.p_hat, self.p_end, n)
        grid[0] = self.p_hat
        grid[-1] = self.p_end
        return grid

    def sampled(self, n: int = 200) -> "WaveCurve":
        p = self.pressure_grid(n)
        T = self.temperature_at(p)
        rho = self.density_at(p)
        samples = tuple(
            (float(pi), float(ti), float(ri)) for pi, ti, ri in zip(p, T, rho, strict=True)
        )
        return replace(self, samples=samples)


def shock_curve(
    params: StiffenedGasParams, p_hat: float, T_hat: float, p_max: float
) -> WaveCurve:
    return WaveCurve(WaveKind.SHOCK, float(p_hat), float(T_hat), params, float(p_max))


def rarefaction_curve(
    params: StiffenedGasParams, p_hat: float, T_hat: float, p_min: float
) -> WaveCurve:
    return WaveCurve(WaveKind.RAREFACTION, float(p_hat), float(T_hat), params, float(p_min))


@dataclass(frozen=True, slots=True)
class IntersectionReport:
    """波曲线与饱和线的相交检测结果

    min_signed_distance 为扫描中 T_curve(p) - T_sat(p) 的最小值，即便未相交也给出。
    point 是离锚点最近的交点；crossings 按压力升序列出全部交点。
    """

    found: bool
    point: tuple[float, float] | None
    min_signed_distance: float
    slope_curve: float
    slope_sat: float
    crossings: tuple[tuple[float, float], ...] = ()
    samples: int = 0


def _first_value(values: np.ndarray) -> float:
    return float(np.asarray(values).reshape(-1)[0])


def _central_slope(func, p: float, lo: float, hi: float) -> float:
    step = 1e-6 * abs(p)
    a = max(p - step, lo)
    b = min(p + step, hi)
    if b <= a:
        return float("nan")
    return (_first_value(func(b)) - _first_value(func(a))) / (b - a)


def intersect_saturation(
    curve: WaveCurveLike,
    sat: SaturationCurve,
    settings: SolverSettings | None = None,
) -> IntersectionReport:
    """在重叠压力区间上几何密集采样 T_curve - T_sat，变号处用 brentq 细化"""
    settings = settings or resolve_solver_settings()
    c_lo, c_hi = curve.pressure_range
    s_lo, s_hi = sat.pressure_range
    lo = max(c_lo, s_lo)
    hi = min(c_hi, s_hi)
    if lo > hi or hi <= 0.0:
        raise OutOfRangeError(
            "波曲线与饱和线的压力范围不相交",
            curve_range=(c_lo, c_hi),
            saturation_range=(s_lo, s_hi),
        )

    n = settings.intersection_samples if hi > lo else 1
    grid = np.geomspace(lo, hi, n) if n > 1 else np.array([lo])
    grid[0] = lo
    grid[-1] = hi
    T_curve = curve.temperature_at(grid)
    distance = T_curve - sat.temperature_at(grid)
    on_line = np.abs(distance) <= ON_LINE_RTOL * np.abs(T_curve)

    # 曲线仅在锚点处与饱和线相切时不算相交
    ignored: set[int] = set()
    anchor = curve.anchor
    if anchor is not None and n > 1:
        if anchor[0] == grid[0] and on_line[0] and not on_line[1]:
            ignored.add(0)
        if anchor[0] == grid[-1] and on_line[-1] and not on_line[-2]:
            ignored.add(n - 1)

    def gap(p: float) -> float:
        return _first_value(curve.temperature_at(p)) - _first_value(sat.temperature_at(p))

    crossings: list[tuple[float, float]] = []
    for i in range(n):
        if on_line[i]:
            if i not in ignored:
                crossings.append((float(grid[i]), float(T_curve[i])))
            continue
        if i + 1 < n and not on_line[i + 1] and np.sign(distance[i]) != np.sign(distance[i + 1]):
            p_root = optimize.brentq(
                gap, grid[i], grid[i + 1], xtol=1e-300, rtol=4.0 * np.finfo(float).eps
            )
            crossings.append((float(p_root), _first_value(curve.temperature_at(p_root))))

    min_distance = float(np.nanmin(distance))
    if crossings:
        if anchor is not None:
            point = min(crossings, key=lambda c: abs(np.log(c[0] / anchor[0])) if anchor[0] > 0 else 0.0)
        else:
            point = crossings[0]
        probe = point[0]
    else:
        point = None
        probe = float(grid[int(np.nanargmin(np.abs(distance)))])

    report = IntersectionReport(
        found=bool(crossings),
        point=point,
        min_signed_distance=min_distance,
        slope_curve=_central_slope(curve.temperature_at, probe, lo, hi),
        slope_sat=_central_slope(sat.temperature_at, probe, lo, hi),
        crossings=tuple(crossings),
        samples=n,
    )
    logger.debug(
        f"[Waves] 相交检测: found={report.found}, crossings={len(crossings)}, "
        f"min_distance={min_distance:.6g} K, p=[{lo:.6g}, {hi:.6g}] Pa"
    )
    return report
