"""两相 Gibbs 平衡：饱和压力、饱和温度与饱和线斜率"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy import optimize

from .eos import PhaseState, StiffenedGasParams, gibbs, phase_state_from_pT
from .errors import (
    BracketError,
    ConvergenceError,
    DegenerateError,
    DomainError,
    OutOfRangeError,
    PhaseWaveError,
)
from .log import logger
from .runtime import T_CRIT, SolverSettings, resolve_solver_settings

__all__ = [
    "SaturationPoint",
    "SaturationCurve",
    "gibbs_difference",
    "p_sat",
    "T_sat",
    "dTsat_dp",
    "saturation_slope",
    "clausius_clapeyron_slope",
    "saturation_point",
    "saturation_curve",
]

_BISECTION_STEPS = 80
_RTOL = 4.0 * np.finfo(float).eps


@dataclass(frozen=True, slots=True)
class SaturationPoint:
    T: float
    p_sat: float
    slope_dT_dp: float
    vapor: PhaseState
    liquid: PhaseState
    near_critical: bool = False


@dataclass(frozen=True, slots=True)
class SaturationCurve:
    """按温度严格递增排列的饱和点序列

    携带 vapor_params/liquid_params 时 temperature_at 精确求解 T_sat，
    否则（例如来自蒸汽表的真实饱和线）在 ln p 上线性插值。
    """

    points: tuple[SaturationPoint, ...]
    vapor_params: StiffenedGasParams | None = None
    liquid_params: StiffenedGasParams | None = None
    source: str = "stiffened-gas"

    def __post_init__(self) -> None:
        if len(self.points) < 2:
            raise DomainError("饱和曲线至少需要两个点", n=len(self.points))
        T = self.temperatures
        p = self.pressures
        if np.any(np.diff(T) <= 0.0):
            raise DomainError("饱和曲线温度必须严格递增")
        if np.any(np.diff(p) <= 0.0):
            raise DomainError("饱和曲线压力必须严格递增")

    @property
    def temperatures(self) -> np.ndarray:
        return np.array([point.T for point in self.points])

    @property
    def pressures(self) -> np.ndarray:
        return np.array([point.p_sat for point in self.points])

    @property
    def pressure_range(self) -> tuple[float, float]:
        return self.points[0].p_sat, self.points[-1].p_sat

    @property
    def temperature_range(self) -> tuple[float, float]:
        return self.points[0].T, self.points[-1].T

    @property
    def is_exact(self) -> bool:
        return self.vapor_params is not None and self.liquid_params is not None

    def temperature_at(self, p: ArrayLike) -> np.ndarray:
        """T_sat(p)；超出曲线压力范围的位置返回 NaN"""
        p = np.atleast_1d(np.asarray(p, dtype=float))
        p_lo, p_hi = self.pressure_range
        inside = (p >= p_lo) & (p <= p_hi)
        result = np.full(p.shape, np.nan)
        if not np.any(inside):
            return result
        if self.is_exact:
            t_lo, t_hi = self.temperature_range
            result[inside] = _t_sat_bisect(
                self.vapor_params, self.liquid_params, p[inside], t_lo, t_hi
            )
        else:
            result[inside] = np.interp(np.log(p[inside]), np.log(self.pressures), self.temperatures)
        return result

    def pressure_at(self, T: float, settings: SolverSettings | None = None) -> float:
        """p_sat(T)；超出曲线温度范围返回 NaN"""
        t_lo, t_hi = self.temperature_range
        if not t_lo <= T <= t_hi:
            return float("nan")
        if self.is_exact:
            return p_sat(self.vapor_params, self.liquid_params, T, settings)
        return float(np.exp(np.interp(T, self.temperatures, np.log(self.pressures))))


def gibbs_difference(
    vapor: StiffenedGasParams, liquid: StiffenedGasParams, p: ArrayLike, T: ArrayLike
):
    """f(p, T) = g_V - g_L；对 p 递增、对 T 递减"""
    return gibbs(vapor, p, T) - gibbs(liquid, p, T)


def _t_sat_bisect(
    vapor: StiffenedGasParams,
    liquid: StiffenedGasParams,
    p: np.ndarray,
    t_lo: float,
    t_hi: float,
) -> np.ndarray:
    # 向量化二分；调用方保证 p 落在 [p_sat(t_lo), p_sat(t_hi)]
    lo = np.full(p.shape, float(t_lo))
    hi = np.full(p.shape, float(t_hi))
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        above = gibbs_difference(vapor, liquid, p, mid) > 0.0
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    return 0.5 * (lo + hi)


def _check_window(T: float, settings: SolverSettings) -> None:
    if not settings.t_min <= T <= settings.t_max:
        raise OutOfRangeError(
            "温度不在饱和求解窗口内",
            T=T,
            window=(settings.t_min, settings.t_max),
        )


def p_sat(
    vapor: StiffenedGasParams,
    liquid: StiffenedGasParams,
    T: float,
    settings: SolverSettings | None = None,
) -> float:
    """求 g_V(p, T) = g_L(p, T) 的根

    从 bracket_p_min 开始按 2 倍几何扫描，找到第一个变号区间后用 brentq 收敛。
    """
    settings = settings or resolve_solver_settings()
    _check_window(T, settings)

    def f(p: float) -> float:
        return float(gibbs_difference(vapor, liquid, p, T))

    lo = settings.bracket_p_min
    f_lo = f(lo)
    if f_lo >= 0.0:
        raise BracketError("扫描起点处 g_V >= g_L，无法建立区间", T=T, p=lo)

    hi = lo
    f_hi = f_lo
    for _ in range(settings.max_iterations):
        hi = lo * 2.0
        if hi > settings.bracket_p_max:
            break
        f_hi = f(hi)
        if f_hi > 0.0:
            break
        lo, f_lo = hi, f_hi
    if f_hi <= 0.0:
        raise BracketError(
            "扫描区间内 g_V - g_L 没有变号",
            T=T,
            bracket=(settings.bracket_p_min, settings.bracket_p_max),
        )

    root, info = optimize.brentq(
        f,
        lo,
        hi,
        xtol=settings.bracket_p_min * 1e-12,
        rtol=_RTOL,
        maxiter=settings.max_iterations,
        full_output=True,
        disp=False,
    )
    if not info.converged:
        raise ConvergenceError("饱和压力迭代未收敛", T=T, iterations=info.iterations)

    g_v = float(gibbs(vapor, root, T))
    residual = abs(f(root)) / max(abs(g_v), 1.0)
    if residual >= settings.tol_g:
        raise ConvergenceError("饱和压力残差超出容差", T=T, p=root, residual=residual)

    logger.debug(f"[Saturation] p_sat(T={T:.6f} K) = {root:.10g} Pa, 残差={residual:.3e}")
    return float(root)


def T_sat(
    vapor: StiffenedGasParams,
    liquid: StiffenedGasParams,
    p: float,
    settings: SolverSettings | None = None,
) -> float:
    settings = settings or resolve_solver_settings()
    if not p > 0.0:
        raise DomainError("要求 p > 0", p=p)

    def f(T: float) -> float:
        return float(gibbs_difference(vapor, liquid, p, T))

    t_lo, t_hi = settings.t_min, settings.t_max
    if not (f(t_lo) > 0.0 and f(t_hi) < 0.0):
        raise OutOfRangeError(
            "压力超出饱和线在温度窗口内可达的范围",
            p=p,
            window=(t_lo, t_hi),
        )

    root, info = optimize.brentq(
        f,
        t_lo,
        t_hi,
        xtol=1e-12,
        rtol=_RTOL,
        maxiter=settings.max_iterations,
        full_output=True,
        disp=False,
    )
    if not info.converged:
        raise ConvergenceError("饱和温度迭代未收敛", p=p, iterations=info.iterations)
    return float(root)


def saturation_slope(
    vapor: StiffenedGasParams, liquid: StiffenedGasParams, p: float, T: float
) -> float:
    """隐函数定理给出的 dT_sat/dp 闭式

    分子为两相 dg/dp（即 1/rho）之差除以 T，分母在平衡点处等于 s_V - s_L。
    """
    numerator = vapor.C * (vapor.gamma - 1.0) / (p + vapor.pi) - liquid.C * (
        liquid.gamma - 1.0
    ) / (p + liquid.pi)
    heat_terms = vapor.C * vapor.gamma - liquid.C * liquid.gamma
    latent = (vapor.q - liquid.q) / T
    denominator = heat_terms + latent
    scale = abs(vapor.C * vapor.gamma) + abs(liquid.C * liquid.gamma) + abs(latent)
    if abs(denominator) <= 1e-12 * scale:
        raise DegenerateError("饱和线斜率分母退化", p=p, T=T, denominator=denominator)
    return T * numerator / denominator


def dTsat_dp(
    vapor: StiffenedGasParams, liquid: StiffenedGasParams, point: SaturationPoint
) -> float:
    return saturation_slope(vapor, liquid, point.p_sat, point.T)


def clausius_clapeyron_slope(vapor_state: PhaseState, liquid_state: PhaseState) -> float:
    """(1/rho_V - 1/rho_L) / (s_V - s_L)"""
    ds = vapor_state.s - liquid_state.s
    if ds == 0.0:
        raise DegenerateError("两相熵相等，斜率无定义", T=vapor_state.T)
    return (1.0 / vapor_state.rho - 1.0 / liquid_state.rho) / ds


def saturation_point(
    vapor: StiffenedGasParams,
    liquid: StiffenedGasParams,
    T: float,
    settings: SolverSettings | None = None,
) -> SaturationPoint:
    settings = settings or resolve_solver_settings()
    pressure = p_sat(vapor, liquid, T, settings)
    return SaturationPoint(
        T=float(T),
        p_sat=pressure,
        slope_dT_dp=saturation_slope(vapor, liquid, pressure, T),
        vapor=phase_state_from_pT(vapor, pressure, T),
        liquid=phase_state_from_pT(liquid, pressure, T),
        near_critical=abs(T_CRIT - T) < settings.near_critical_margin,
    )


def saturation_curve(
    vapor: StiffenedGasParams,
    liquid: StiffenedGasParams,
    T_min: float,
    T_max: float,
    n: int,
    settings: SolverSettings | None = None,
) -> SaturationCurve:
    settings = settings or resolve_solver_settings()
    if n < 2:
        raise DomainError("采样点数 n 必须 >= 2", n=n)
    if not T_min < T_max:
        raise DomainError("要求 T_min < T_max", T_min=T_min, T_max=T_max)
    _check_window(T_min, settings)
    _check_window(T_max, settings)

    points: list[SaturationPoint] = []
    for T in np.linspace(T_min, T_max, n):
        try:
            points.append(saturation_point(vapor, liquid, float(T), settings))
        except PhaseWaveError as e:
            raise e.with_context(T=float(T)) from e

    curve = SaturationCurve(tuple(points), vapor_params=vapor, liquid_params=liquid)
    flagged = sum(1 for point in points if point.near_critical)
    logger.info(
        f"[Saturation] 饱和曲线完成: n={n}, T=[{T_min:.3f}, {T_max:.3f}] K, "
        f"p=[{points[0].p_sat:.6g}, {points[-1].p_sat:.6g}] Pa"
    )
    if flagged:
        logger.warning(f"[Saturation] {flagged} 个点位于临界点附近，结果仅供参考")
    return curve
