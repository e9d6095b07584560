"""饱和线蒸汽表读写与局部刚性气体参数拟合

蒸汽表只作为真实状态方程的数据来源；每一行在饱和点处给出两相的
密度、声速、熵、内能以及液相定压比热。拟合得到的参数在锚点处精确
复现这些值。
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import astuple, dataclass, fields
from os import PathLike
from pathlib import Path
from typing import IO, Any

import numpy as np
from iapws import IAPWS97

from .eos import PhaseState, StiffenedGasParams, density_from_pT, entropy
from .errors import (
    DegenerateError,
    DomainError,
    OutOfRangeError,
    PhaseWaveError,
    TableParseError,
    TableValidationError,
)
from .log import logger
from .runtime import T_CRIT, T_TRIPLE, SolverSettings, resolve_solver_settings
from .saturation import SaturationCurve, SaturationPoint, clausius_clapeyron_slope

__all__ = [
    "TABLE_HEADER",
    "SteamTableRow",
    "SteamTable",
    "LocalFit",
    "NeighborhoodDeviation",
    "validate_rows",
    "load_table",
    "dump_table",
    "build_table_iapws97",
    "query_saturation",
    "fit_vapor_params",
    "fit_liquid_params",
    "fit_local",
    "fit_curve",
    "neighborhood_deviation",
    "table_saturation_curve",
]

TABLE_HEADER = ("T_K", "p_sat_Pa", "rho_V", "rho_L", "a_V", "a_L", "s_V", "s_L", "e_V", "e_L", "cp_L")

_MPA = 1e6
_KILO = 1e3


@dataclass(frozen=True, slots=True)
class SteamTableRow:
    T: float
    p_sat: float
    rho_V: float
    rho_L: float
    a_V: float
    a_L: float
    s_V: float
    s_L: float
    e_V: float
    e_L: float
    cp_L: float


_ROW_FIELDS = tuple(f.name for f in fields(SteamTableRow))


@dataclass(frozen=True, slots=True)
class SteamTable:
    rows: tuple[SteamTableRow, ...]
    source: str = ""

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        if name not in _ROW_FIELDS:
            raise DomainError("未知的蒸汽表列", column=name)
        return np.array([getattr(row, name) for row in self.rows])

    @property
    def temperatures(self) -> np.ndarray:
        return self.column("T")

    @property
    def temperature_range(self) -> tuple[float, float]:
        return self.rows[0].T, self.rows[-1].T


@dataclass(frozen=True, slots=True)
class LocalFit:
    """锚点温度处两相的局部最优参数"""

    T_anchor: float
    p_anchor: float
    vapor: StiffenedGasParams
    liquid: StiffenedGasParams
    pi_liquid_negative: bool = False
    near_critical: bool = False


@dataclass(frozen=True, slots=True)
class NeighborhoodDeviation:
    T_anchor: float
    offset: float
    rho_vapor: float
    rho_liquid: float
    s_vapor: float
    s_liquid: float

    @property
    def max_deviation(self) -> float:
        return max(self.rho_vapor, self.rho_liquid, self.s_vapor, self.s_liquid)


def _read_text(source: str | PathLike[str] | IO[Any]) -> tuple[str, str]:
    if hasattr(source, "read"):
        data = source.read()
        name = str(getattr(source, "name", "<stream>"))
    else:
        path = Path(source)
        try:
            data = path.read_bytes()
        except FileNotFoundError as e:
            raise TableParseError("蒸汽表文件不存在", path=str(path)) from e
        name = str(path)
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise TableParseError("蒸汽表不是 UTF-8 编码", source=name) from e
    return data, name


def _parse_row(values: list[str], line: int) -> SteamTableRow:
    if len(values) != len(TABLE_HEADER):
        raise TableParseError(
            "列数与表头不一致", line=line, expected=len(TABLE_HEADER), got=len(values)
        )
    parsed: list[float] = []
    for column, raw in zip(TABLE_HEADER, values, strict=True):
        try:
            value = float(raw)
        except ValueError as e:
            raise TableParseError("无法解析数值", line=line, column=column, value=raw) from e
        if not math.isfinite(value):
            raise TableParseError("数值必须有限", line=line, column=column, value=raw)
        parsed.append(value)
    return SteamTableRow(*parsed)


def validate_rows(rows: list[SteamTableRow]) -> None:
    if len(rows) < 2:
        raise TableValidationError("蒸汽表至少需要两行数据", rows=len(rows))
    for index, row in enumerate(rows):
        line = index + 2
        for name in ("p_sat", "rho_V", "rho_L", "a_V", "a_L", "cp_L", "T"):
            if getattr(row, name) <= 0.0:
                raise TableValidationError("物理量必须为正", line=line, column=name)
        if row.T < T_CRIT and row.rho_L <= row.rho_V:
            raise TableValidationError("要求 rho_L > rho_V", line=line, T=row.T)
        if index == 0:
            continue
        previous = rows[index - 1]
        if row.T <= previous.T:
            raise TableValidationError("温度必须严格递增", line=line, T=row.T, previous=previous.T)
        if row.p_sat <= previous.p_sat:
            raise TableValidationError("饱和压力必须严格递增", line=line, T=row.T)


def load_table(source: str | PathLike[str] | IO[Any]) -> SteamTable:
    """读取并校验蒸汽表 CSV；表头必须与 TABLE_HEADER 完全一致"""
    text, name = _read_text(source)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].strip():
        raise TableParseError("蒸汽表为空", line=1, source=name)

    reader = csv.reader(lines)
    header = next(reader)
    if tuple(header) != TABLE_HEADER:
        raise TableParseError(
            "表头不匹配", line=1, expected=",".join(TABLE_HEADER), got=",".join(header)
        )

    rows: list[SteamTableRow] = []
    for line_number, values in enumerate(reader, start=2):
        if not values:
            raise TableParseError("存在空行", line=line_number)
        rows.append(_parse_row(values, line_number))

    validate_rows(rows)
    logger.info(
        f"[SteamTable] 读取 {name}: {len(rows)} 行, T=[{rows[0].T:.2f}, {rows[-1].T:.2f}] K"
    )
    return SteamTable(tuple(rows), source=name)


def dump_table(table: SteamTable, target: str | PathLike[str] | IO[str]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TABLE_HEADER)
    for row in table.rows:
        writer.writerow(format(value, ".17g") for value in astuple(row))
    if hasattr(target, "write"):
        target.write(buffer.getvalue())
        return
    Path(target).write_text(buffer.getvalue(), encoding="utf-8", newline="\n")


def _iapws_row(T: float) -> SteamTableRow:
    liquid_state = IAPWS97(T=T, x=0)
    vapor_state = IAPWS97(T=T, x=1)
    liquid = liquid_state.Liquid
    vapor = vapor_state.Vapor
    return SteamTableRow(
        T=float(T),
        p_sat=float(liquid_state.P) * _MPA,
        rho_V=float(vapor.rho),
        rho_L=float(liquid.rho),
        a_V=float(vapor.w),
        a_L=float(liquid.w),
        s_V=float(vapor.s) * _KILO,
        s_L=float(liquid.s) * _KILO,
        e_V=float(vapor.u) * _KILO,
        e_L=float(liquid.u) * _KILO,
        cp_L=float(liquid.cp) * _KILO,
    )


def build_table_iapws97(
    T_min: float = T_TRIPLE, T_max: float = 647.0, step: float = 1.0
) -> SteamTable:
    """用 IAPWS-IF97 生成饱和线表：T_min 加上 (T_min, T_max] 内 step 的整数倍"""
    if not (T_TRIPLE <= T_min < T_max < T_CRIT) or step <= 0.0:
        raise OutOfRangeError("温度范围必须位于三相点与临界点之间", T_min=T_min, T_max=T_max)
    grid = [float(T_min)]
    k = math.floor(T_min / step) + 1
    while k * step <= T_max + 1e-9:
        grid.append(round(k * step, 10))
        k += 1

    rows = [_iapws_row(T) for T in grid]
    validate_rows(rows)
    logger.info(f"[SteamTable] IAPWS-IF97 生成 {len(rows)} 行, T=[{grid[0]}, {grid[-1]}] K")
    return SteamTable(tuple(rows), source="IAPWS-IF97")


def query_saturation(table: SteamTable, T: float) -> SteamTableRow:
    """逐列线性插值；网格点上返回原行"""
    t_lo, t_hi = table.temperature_range
    if not t_lo <= T <= t_hi:
        raise OutOfRangeError("温度超出蒸汽表范围", T=T, table_range=(t_lo, t_hi))
    temperatures = table.temperatures
    index = int(np.searchsorted(temperatures, T))
    if index < len(table) and temperatures[index] == T:
        return table.rows[index]
    below = table.rows[index - 1]
    above = table.rows[index]
    weight = (T - below.T) / (above.T - below.T)
    values = [
        a + weight * (b - a) for a, b in zip(astuple(below), astuple(above), strict=True)
    ]
    values[0] = float(T)
    return SteamTableRow(*values)


def _entropy_offset(C: float, gamma: float, pi: float, p: float, T: float, s: float) -> float:
    return s - C * (gamma * math.log(T) - (gamma - 1.0) * math.log(p + pi))


def fit_vapor_params(row: SteamTableRow) -> StiffenedGasParams:
    """pi_V = 0；gamma 由声速给出，随后依次由内能、温度、熵关系求 q、C、q'"""
    p, rho, T = row.p_sat, row.rho_V, row.T
    gamma = row.a_V**2 * rho / p
    if not gamma > 1.0:
        raise DegenerateError("拟合得到 gamma_V <= 1", T=T, gamma=gamma)
    q = row.e_V - p / (rho * (gamma - 1.0))
    C = p / (rho * T * (gamma - 1.0))
    q_prime = _entropy_offset(C, gamma, 0.0, p, T, row.s_V)
    return StiffenedGasParams(gamma=gamma, pi=0.0, C=C, q=q, q_prime=q_prime)


def fit_liquid_params(row: SteamTableRow) -> StiffenedGasParams:
    """液相五参数的闭式消元

    由 e = cp T - p/rho + q 得 q；代入内能式 (p + gamma pi)/(rho(gamma-1)) = cp T - p/rho，
    再用 a^2 = gamma (p+pi)/rho 消去 pi，得 gamma = 1 + a^2/(cp T)，pi = a^2 rho/gamma - p。
    """
    p, rho, T, a, cp = row.p_sat, row.rho_L, row.T, row.a_L, row.cp_L
    q = row.e_L - cp * T + p / rho
    gamma = 1.0 + a**2 / (cp * T)
    if not gamma > 1.0:
        raise DegenerateError("拟合得到 gamma_L <= 1", T=T, gamma=gamma)
    pi = a**2 * rho / gamma - p
    if p + pi <= 0.0:
        raise DegenerateError("拟合得到 p + pi_L <= 0", T=T, pi=pi)
    C = (p + pi) / (rho * T * (gamma - 1.0))
    q_prime = _entropy_offset(C, gamma, pi, p, T, row.s_L)
    # pi_L < 0 不拒绝，只在 LocalFit 上标记
    return StiffenedGasParams(gamma=gamma, pi=pi, C=C, q=q, q_prime=q_prime)


def fit_local(
    table: SteamTable, T: float, settings: SolverSettings | None = None
) -> LocalFit:
    settings = settings or resolve_solver_settings()
    row = query_saturation(table, T)
    near_critical = abs(T_CRIT - T) < settings.near_critical_margin
    try:
        vapor = fit_vapor_params(row)
        liquid = fit_liquid_params(row)
    except PhaseWaveError as e:
        raise e.with_context(T=float(T)) from e
    fit = LocalFit(
        T_anchor=float(T),
        p_anchor=row.p_sat,
        vapor=vapor,
        liquid=liquid,
        pi_liquid_negative=liquid.pi < 0.0,
        near_critical=near_critical,
    )
    if fit.pi_liquid_negative:
        logger.warning(f"[SteamTable] T={T:.3f} K 处拟合得到 pi_L={liquid.pi:.6g} < 0")
    return fit


def fit_curve(
    table: SteamTable,
    T_min: float,
    T_max: float,
    n: int,
    settings: SolverSettings | None = None,
) -> list[LocalFit]:
    """在 [T_min, T_max] 上等距取 n 个锚点逐点拟合

    排除区（T > near_critical_exclusion）内的退化拟合记录警告后跳过，其余拟合错误原样抛出。
    """
    settings = settings or resolve_solver_settings()
    if n < 1:
        raise DomainError("锚点数 n 必须 >= 1", n=n)
    t_lo, t_hi = table.temperature_range
    if not (t_lo <= T_min <= T_max <= t_hi):
        raise OutOfRangeError("拟合窗口超出蒸汽表范围", window=(T_min, T_max), table_range=(t_lo, t_hi))
    anchors = [float(T_min)] if n == 1 else [float(T) for T in np.linspace(T_min, T_max, n)]

    fits: list[LocalFit] = []
    skipped = 0
    for T in anchors:
        try:
            fits.append(fit_local(table, T, settings))
        except DegenerateError as e:
            if T <= settings.near_critical_exclusion:
                raise
            skipped += 1
            logger.warning(f"[SteamTable] 临界点附近拟合退化，跳过 T={T:.3f} K: {e}")
    logger.info(f"[SteamTable] 局部拟合完成: {len(fits)} 个锚点, 跳过 {skipped} 个")
    return fits


def neighborhood_deviation(
    fit: LocalFit, table: SteamTable, offset: float = 1.0
) -> NeighborhoodDeviation:
    """拟合参数在锚点 +-offset 处对表中 rho、s 的最大相对偏差"""
    t_lo, t_hi = table.temperature_range
    neighbors = [
        T for T in (fit.T_anchor - offset, fit.T_anchor + offset) if t_lo <= T <= t_hi
    ]
    if not neighbors:
        raise OutOfRangeError("锚点邻域超出蒸汽表范围", T=fit.T_anchor, offset=offset)

    worst = {"rho_V": 0.0, "rho_L": 0.0, "s_V": 0.0, "s_L": 0.0}
    for T in neighbors:
        row = query_saturation(table, T)
        for phase, params, rho, s in (
            ("V", fit.vapor, row.rho_V, row.s_V),
            ("L", fit.liquid, row.rho_L, row.s_L),
        ):
            rho_fit = float(density_from_pT(params, row.p_sat, T))
            s_fit = float(entropy(params, row.p_sat, T))
            worst[f"rho_{phase}"] = max(worst[f"rho_{phase}"], abs(rho_fit - rho) / rho)
            worst[f"s_{phase}"] = max(
                worst[f"s_{phase}"], abs(s_fit - s) / max(abs(s), params.C)
            )
    return NeighborhoodDeviation(
        T_anchor=fit.T_anchor,
        offset=offset,
        rho_vapor=worst["rho_V"],
        rho_liquid=worst["rho_L"],
        s_vapor=worst["s_V"],
        s_liquid=worst["s_L"],
    )


def _row_state(p: float, rho: float, T: float, e: float, s: float, a: float) -> PhaseState:
    return PhaseState(p=p, rho=rho, T=T, e=e, s=s, a=a, g=e + p / rho - T * s)


def table_saturation_curve(
    table: SteamTable, settings: SolverSettings | None = None
) -> SaturationCurve:
    """蒸汽表给出的真实饱和线，斜率按 Clausius-Clapeyron 关系计算"""
    settings = settings or resolve_solver_settings()
    points: list[SaturationPoint] = []
    for row in table.rows:
        vapor = _row_state(row.p_sat, row.rho_V, row.T, row.e_V, row.s_V, row.a_V)
        liquid = _row_state(row.p_sat, row.rho_L, row.T, row.e_L, row.s_L, row.a_L)
        points.append(
            SaturationPoint(
                T=row.T,
                p_sat=row.p_sat,
                slope_dT_dp=clausius_clapeyron_slope(vapor, liquid),
                vapor=vapor,
                liquid=liquid,
                near_critical=abs(T_CRIT - row.T) < settings.near_critical_margin,
            )
        )
    return SaturationCurve(tuple(points), source=table.source or "table")
