"""相变不可能性结论的数值验证

压缩纯蒸汽不会凝结、膨胀液体只能产生湿蒸汽（弱空化）而不会直接得到纯蒸汽（强空化）。
每个结论都以可检验的斜率差或交点报告给出，而不是单个布尔值。
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core.eos import TABLE1_LIQUID, TABLE1_VAPOR, StiffenedGasParams, entropy
from ..core.errors import DomainError, OutOfRangeError, PhaseWaveError, RegionError
from ..core.log import logger
from ..core.riemann import RiemannSolution, solve, star_temperatures, symmetric_piston_input
from ..core.runtime import SolverSettings, resolve_solver_settings
from ..core.saturation import SaturationCurve, saturation_point, saturation_slope
from ..core.steamtable import (
    LocalFit,
    SteamTable,
    fit_curve,
    fit_local,
    query_saturation,
    table_saturation_curve,
)
from ..core.waves import (
    ON_LINE_RTOL,
    IntersectionReport,
    WaveCurve,
    admissible_initial_slope,
    intersect_saturation,
    isentrope_slope,
    rarefaction_curve,
    shock_curve,
)

__all__ = [
    "CavitationKind",
    "TheoremSample",
    "TheoremReport",
    "SignConditions",
    "CompressionTrace",
    "CavitationReport",
    "MassFractionBound",
    "EntropySeparation",
    "ExpansionTubeReport",
    "condensation_sign_conditions",
    "verify_condensation_table1",
    "verify_condensation_fitted",
    "trace_compression",
    "classify_cavitation",
    "strong_cavitation_contradiction",
    "verify_strong_cavitation_fitted",
    "survey_cavitation",
    "mass_fraction_at",
    "vapor_mass_fraction_bound",
    "entropy_separation",
    "expansion_tube_cavitates",
]

# 质量分数上界要求蒸汽表大致覆盖三相点到临界点
_COVERAGE_LOW = 280.0
_COVERAGE_HIGH = 640.0


class CavitationKind:
    NONE = "none"
    WEAK = "weak"


@dataclass(frozen=True, slots=True)
class TheoremSample:
    T: float
    p: float
    slope_wave: float
    slope_sat: float
    margin: float
    strict: bool
    near_critical: bool = False
    excluded: bool = False


@dataclass(frozen=True, slots=True)
class TheoremReport:
    """margin = slope_wave - slope_sat；all_strict 只统计未被排除的样本"""

    mode: str
    sweep: tuple[TheoremSample, ...]
    all_strict: bool
    min_margin: float
    sign_conditions_hold: bool | None = None

    @property
    def failures(self) -> tuple[TheoremSample, ...]:
        return tuple(s for s in self.sweep if not s.excluded and not s.strict)

    @property
    def excluded_count(self) -> int:
        return sum(1 for s in self.sweep if s.excluded)


@dataclass(frozen=True, slots=True)
class SignConditions:
    liquid_volume_term: float
    latent_term: float

    @property
    def holds(self) -> bool:
        return self.liquid_volume_term < 0.0 and self.latent_term > 0.0


@dataclass(frozen=True, slots=True)
class CompressionTrace:
    curve: WaveCurve
    report: IntersectionReport


@dataclass(frozen=True, slots=True)
class CavitationReport:
    initial: tuple[float, float]
    kind: str
    saturation_hit: tuple[float, float] | None
    mu_max: float
    intersection: IntersectionReport | None = None


@dataclass(frozen=True, slots=True)
class MassFractionBound:
    mu_max: float
    T_start: float
    T_end: float
    s_crit: float
    mu_from_critical: float


@dataclass(frozen=True, slots=True)
class EntropySeparation:
    s_crit: float
    max_s_liquid: float
    min_s_vapor: float

    @property
    def holds(self) -> bool:
        return self.max_s_liquid < self.s_crit < self.min_s_vapor


@dataclass(frozen=True, slots=True)
class ExpansionTubeReport:
    solution: RiemannSolution
    p_star: float
    T_star: float
    p_sat_star: float
    cavitates: bool


def _require_vapor_pi(vapor: StiffenedGasParams) -> None:
    if vapor.pi != 0.0:
        raise DomainError("蒸汽相要求 pi = 0", pi=vapor.pi)


def _is_strict(margin: float, slope_sat: float, settings: SolverSettings) -> bool:
    return margin > settings.strictness_rtol * abs(slope_sat)


def _build_report(
    mode: str, samples: list[TheoremSample], sign_ok: bool | None
) -> TheoremReport:
    samples.sort(key=lambda s: s.T)
    counted = [s for s in samples if not s.excluded]
    all_strict = bool(counted) and all(s.strict for s in counted)
    min_margin = min((s.margin for s in counted), default=float("nan"))
    report = TheoremReport(
        mode=mode,
        sweep=tuple(samples),
        all_strict=all_strict,
        min_margin=min_margin,
        sign_conditions_hold=sign_ok,
    )
    logger.info(
        f"[Analysis] {mode} 验证: {len(samples)} 个样本, 排除 {report.excluded_count} 个, "
        f"all_strict={all_strict}, min_margin={min_margin:.6g} K/Pa"
    )
    if report.failures:
        logger.warning(f"[Analysis] {mode} 验证存在 {len(report.failures)} 个非严格样本")
    return report


def condensation_sign_conditions(
    vapor: StiffenedGasParams, liquid: StiffenedGasParams, p: float, T: float
) -> SignConditions:
    """固定参数证明所依赖的两个符号条件：液相体积项 < 0，潜热项 > 0"""
    return SignConditions(
        liquid_volume_term=-liquid.C * (liquid.gamma - 1.0) / (p + liquid.pi),
        latent_term=-liquid.C * liquid.gamma + (vapor.q - liquid.q) / T,
    )


def verify_condensation_table1(
    T_min: float = 274.0,
    T_max: float = 645.0,
    n: int = 500,
    vapor: StiffenedGasParams = TABLE1_VAPOR,
    liquid: StiffenedGasParams = TABLE1_LIQUID,
    settings: SolverSettings | None = None,
) -> TheoremReport:
    """固定参数下激波初态曲线斜率严格大于饱和线斜率"""
    settings = settings or resolve_solver_settings()
    _require_vapor_pi(vapor)
    if n < 1:
        raise DomainError("样本数 n 必须 >= 1", n=n)

    samples: list[TheoremSample] = []
    sign_ok = True
    temperatures = [float(T_min)] if n == 1 else np.linspace(T_min, T_max, n)
    for T in temperatures:
        T = float(T)
        try:
            point = saturation_point(vapor, liquid, T, settings)
        except PhaseWaveError as e:
            raise e.with_context(T=T) from e
        slope_wave = admissible_initial_slope(vapor.gamma, point.p_sat, T)
        margin = slope_wave - point.slope_dT_dp
        sign_ok = sign_ok and condensation_sign_conditions(vapor, liquid, point.p_sat, T).holds
        samples.append(
            TheoremSample(
                T=T,
                p=point.p_sat,
                slope_wave=slope_wave,
                slope_sat=point.slope_dT_dp,
                margin=margin,
                strict=_is_strict(margin, point.slope_dT_dp, settings),
                near_critical=point.near_critical,
                excluded=T > settings.near_critical_exclusion,
            )
        )
    return _build_report("table1", samples, sign_ok)


def verify_condensation_fitted(
    table: SteamTable,
    T_min: float = 274.0,
    T_max: float = 646.0,
    n: int = 373,
    settings: SolverSettings | None = None,
) -> TheoremReport:
    """逐锚点局部拟合参数下的同一斜率不等式"""
    settings = settings or resolve_solver_settings()
    samples: list[TheoremSample] = []
    for fit in fit_curve(table, T_min, T_max, n, settings):
        T, p = fit.T_anchor, fit.p_anchor
        slope_wave = admissible_initial_slope(fit.vapor.gamma, p, T)
        slope_sat = saturation_slope(fit.vapor, fit.liquid, p, T)
        margin = slope_wave - slope_sat
        samples.append(
            TheoremSample(
                T=T,
                p=p,
                slope_wave=slope_wave,
                slope_sat=slope_sat,
                margin=margin,
                strict=_is_strict(margin, slope_sat, settings),
                near_critical=fit.near_critical,
                excluded=T > settings.near_critical_exclusion,
            )
        )
    return _build_report("fitted", samples, None)


def trace_compression(
    vapor: StiffenedGasParams,
    sat: SaturationCurve,
    p_hat: float,
    T_hat: float,
    p_max: float,
    settings: SolverSettings | None = None,
) -> CompressionTrace:
    """从蒸汽相锚点出发的压缩 Hugoniot 与饱和线的相交检测"""
    settings = settings or resolve_solver_settings()
    T_sat_hat = float(sat.temperature_at(p_hat)[0])
    if np.isnan(T_sat_hat):
        raise RegionError("锚点压力超出饱和线范围", p_hat=p_hat, range=sat.pressure_range)
    if T_hat < T_sat_hat * (1.0 - ON_LINE_RTOL):
        raise RegionError("锚点不在蒸汽相区", p_hat=p_hat, T_hat=T_hat, T_sat=T_sat_hat)
    if p_max <= p_hat:
        raise DomainError("要求 p_max > p_hat", p_hat=p_hat, p_max=p_max)

    curve = shock_curve(vapor, p_hat, T_hat, p_max)
    report = intersect_saturation(curve, sat, settings)
    logger.debug(
        f"[Analysis] 压缩追踪 p_hat={p_hat:.6g} Pa, T_hat={T_hat:.6g} K: "
        f"found={report.found}, min_distance={report.min_signed_distance:.6g} K"
    )
    return CompressionTrace(curve=curve, report=report)


def _mass_fraction(s_start: float, s_liquid, s_vapor):
    return np.clip((s_start - s_liquid) / (s_vapor - s_liquid), 0.0, 1.0)


def classify_cavitation(
    liquid: StiffenedGasParams,
    sat: SaturationCurve,
    p_hat: float,
    T_hat: float,
    p_min: float,
    settings: SolverSettings | None = None,
) -> CavitationReport:
    """沿液相稀疏波膨胀到 p_min：到达饱和线为弱空化，否则为无空化

    不存在强空化分类。mu_max 是到达饱和线后继续膨胀至 p_min 时
    可能出现的最大蒸汽质量分数。
    """
    settings = settings or resolve_solver_settings()
    p_sat_hat = sat.pressure_at(T_hat, settings)
    if np.isnan(p_sat_hat):
        raise RegionError("锚点温度超出饱和线范围", T_hat=T_hat, range=sat.temperature_range)
    if not p_hat > p_sat_hat:
        raise RegionError("锚点不在液相区", p_hat=p_hat, T_hat=T_hat, p_sat=p_sat_hat)
    if not p_min < p_hat:
        raise DomainError("要求 p_min < p_hat", p_hat=p_hat, p_min=p_min)

    curve = rarefaction_curve(liquid, p_hat, T_hat, p_min)
    try:
        report = intersect_saturation(curve, sat, settings)
    except OutOfRangeError:
        logger.debug(f"[Analysis] 膨胀区间与饱和线不重叠，p_min={p_min:.6g} Pa")
        return CavitationReport((p_hat, T_hat), CavitationKind.NONE, None, 0.0, None)

    if not report.found or report.point is None:
        return CavitationReport((p_hat, T_hat), CavitationKind.NONE, None, 0.0, report)

    p_hit, T_hit = report.point
    s_start = float(entropy(liquid, p_hat, T_hat))
    temperatures = sat.temperatures
    s_liquid = np.array([pt.liquid.s for pt in sat.points])
    s_vapor = np.array([pt.vapor.s for pt in sat.points])
    reachable = (temperatures <= T_hit) & (sat.pressures >= p_min)
    candidates = [
        float(
            _mass_fraction(
                s_start,
                np.interp(T_hit, temperatures, s_liquid),
                np.interp(T_hit, temperatures, s_vapor),
            )
        )
    ]
    if np.any(reachable):
        candidates.extend(_mass_fraction(s_start, s_liquid[reachable], s_vapor[reachable]).tolist())

    logger.debug(
        f"[Analysis] 弱空化: 饱和交点 p={p_hit:.6g} Pa, T={T_hit:.6g} K, mu_max={max(candidates):.4f}"
    )
    return CavitationReport(
        initial=(p_hat, T_hat),
        kind=CavitationKind.WEAK,
        saturation_hit=(p_hit, T_hit),
        mu_max=max(candidates),
        intersection=report,
    )


def strong_cavitation_contradiction(fit: LocalFit, p_star: float, T_star: float) -> float:
    """蒸汽侧等熵线斜率减饱和线斜率；为正即说明纯蒸汽状态不可达"""
    _require_vapor_pi(fit.vapor)
    return isentrope_slope(fit.vapor.gamma, p_star, T_star) - saturation_slope(
        fit.vapor, fit.liquid, p_star, T_star
    )


def verify_strong_cavitation_fitted(
    table: SteamTable,
    T_min: float = 274.0,
    T_max: float = 646.0,
    n: int = 373,
    settings: SolverSettings | None = None,
) -> TheoremReport:
    """逐锚点检查强空化矛盾：蒸汽等熵线斜率严格大于饱和线斜率"""
    settings = settings or resolve_solver_settings()
    samples: list[TheoremSample] = []
    for fit in fit_curve(table, T_min, T_max, n, settings):
        T, p = fit.T_anchor, fit.p_anchor
        slope_wave = isentrope_slope(fit.vapor.gamma, p, T)
        slope_sat = saturation_slope(fit.vapor, fit.liquid, p, T)
        margin = strong_cavitation_contradiction(fit, p, T)
        samples.append(
            TheoremSample(
                T=T,
                p=p,
                slope_wave=slope_wave,
                slope_sat=slope_sat,
                margin=margin,
                strict=_is_strict(margin, slope_sat, settings),
                near_critical=fit.near_critical,
                excluded=T > settings.near_critical_exclusion,
            )
        )
    return _build_report("cavitation", samples, None)


def survey_cavitation(
    table: SteamTable,
    temperatures,
    overpressure: float = 0.5,
    settings: SolverSettings | None = None,
) -> tuple[CavitationReport, ...]:
    """在各温度处用局部拟合的液相参数，从 p_sat (1 + overpressure) 膨胀到表中最低饱和压力"""
    settings = settings or resolve_solver_settings()
    if overpressure <= 0.0:
        raise DomainError("超压比例必须为正", overpressure=overpressure)
    sat = table_saturation_curve(table, settings)
    p_min = sat.pressure_range[0]
    reports: list[CavitationReport] = []
    for T in temperatures:
        fit = fit_local(table, float(T), settings)
        p_hat = fit.p_anchor * (1.0 + overpressure)
        reports.append(classify_cavitation(fit.liquid, sat, p_hat, fit.T_anchor, p_min, settings))
    weak = sum(1 for report in reports if report.kind == CavitationKind.WEAK)
    logger.info(f"[Analysis] 空化分类: {len(reports)} 个液相锚点, 弱空化 {weak} 个")
    return tuple(reports)


def mass_fraction_at(table: SteamTable, T_start: float, T_end: float) -> float:
    """从 T_start 的饱和液体等熵膨胀到 T_end 的湿蒸汽时的蒸汽质量分数"""
    if T_end > T_start:
        raise DomainError("要求 T_end <= T_start", T_start=T_start, T_end=T_end)
    start = query_saturation(table, T_start)
    end = query_saturation(table, T_end)
    return float(_mass_fraction(start.s_L, end.s_L, end.s_V))


def _critical_entropy(table: SteamTable) -> float:
    hottest = table.rows[-1]
    return 0.5 * (hottest.s_L + hottest.s_V)


def vapor_mass_fraction_bound(table: SteamTable) -> MassFractionBound:
    """所有 T_end <= T_start 组合上 mu 的上确界"""
    t_lo, t_hi = table.temperature_range
    if t_lo > _COVERAGE_LOW or t_hi < _COVERAGE_HIGH:
        raise OutOfRangeError(
            "蒸汽表覆盖范围不足以估计质量分数上界",
            table_range=(t_lo, t_hi),
            required=(_COVERAGE_LOW, _COVERAGE_HIGH),
        )
    temperatures = table.temperatures
    s_liquid = table.column("s_L")
    s_vapor = table.column("s_V")

    # mu[i, j]：从第 i 行饱和液体膨胀到第 j 行温度
    mu = _mass_fraction(s_liquid[:, None], s_liquid[None, :], s_vapor[None, :])
    mu = np.where(np.tri(len(table), dtype=bool), mu, 0.0)
    i, j = np.unravel_index(int(np.argmax(mu)), mu.shape)

    s_crit = _critical_entropy(table)
    mu_crit = float(np.max(_mass_fraction(s_crit, s_liquid, s_vapor)))
    bound = MassFractionBound(
        mu_max=float(mu[i, j]),
        T_start=float(temperatures[i]),
        T_end=float(temperatures[j]),
        s_crit=s_crit,
        mu_from_critical=mu_crit,
    )
    logger.info(
        f"[Analysis] 蒸汽质量分数上界 mu_max={bound.mu_max:.6f} "
        f"(T_start={bound.T_start:.2f} K, T_end={bound.T_end:.2f} K)"
    )
    return bound


def entropy_separation(table: SteamTable) -> EntropySeparation:
    """饱和液体熵都低于临界熵，饱和蒸汽熵都高于临界熵"""
    return EntropySeparation(
        s_crit=_critical_entropy(table),
        max_s_liquid=float(np.max(table.column("s_L"))),
        min_s_vapor=float(np.min(table.column("s_V"))),
    )


def expansion_tube_cavitates(
    liquid: StiffenedGasParams,
    sat: SaturationCurve,
    p: float,
    T: float,
    speed: float,
    settings: SolverSettings | None = None,
) -> ExpansionTubeReport:
    """对称膨胀管：两侧液体以 speed 相背运动，星区压力低于对应饱和压力即发生空化"""
    settings = settings or resolve_solver_settings()
    if speed <= 0.0:
        raise DomainError("膨胀速度必须为正", speed=speed)
    problem = symmetric_piston_input(liquid, p, T, -speed)
    solution = solve(problem, settings)
    T_star, _ = star_temperatures(solution, problem)
    p_sat_star = sat.pressure_at(T_star, settings)
    if np.isnan(p_sat_star):
        raise OutOfRangeError("星区温度超出饱和线范围", T_star=T_star)
    report = ExpansionTubeReport(
        solution=solution,
        p_star=solution.p_star,
        T_star=T_star,
        p_sat_star=p_sat_star,
        cavitates=solution.p_star < p_sat_star,
    )
    logger.debug(
        f"[Analysis] 膨胀管 speed={speed:.6g} m/s: p*={report.p_star:.6g} Pa, "
        f"p_sat(T*)={p_sat_star:.6g} Pa, cavitates={report.cavitates}"
    )
    return report
