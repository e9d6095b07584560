"""修正刚性气体状态方程（单相）

所有函数同时接受标量与 numpy 数组，单位统一为 SI（Pa、K、kg/m³、J/kg）。
可行域为 rho > 0、T > 0、p + pi > 0，越界抛出 DomainError 而不是返回 NaN。
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from os import PathLike
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from .errors import ConfigError, DomainError

__all__ = [
    "StiffenedGasParams",
    "PhaseState",
    "ConsistencyResiduals",
    "PRESETS",
    "TABLE1_VAPOR",
    "TABLE1_LIQUID",
    "IDEAL_GAS",
    "energy",
    "temperature",
    "density_from_pT",
    "sound_speed",
    "entropy",
    "gibbs",
    "enthalpy",
    "check_consistency",
    "phase_state",
    "phase_state_from_pT",
    "params_to_dict",
    "params_from_dict",
    "load_params_json",
    "get_preset",
]

PARAM_KEYS = ("gamma", "pi", "C", "q", "q_prime")


@dataclass(frozen=True, slots=True)
class StiffenedGasParams:
    """单相状态方程的五个常数"""

    gamma: float
    pi: float
    C: float
    q: float = 0.0
    q_prime: float = 0.0

    def __post_init__(self) -> None:
        for key in PARAM_KEYS:
            if not math.isfinite(getattr(self, key)):
                raise DomainError("状态方程参数必须是有限数", field=key, value=getattr(self, key))
        if self.gamma <= 1.0:
            raise DomainError("gamma 必须大于 1", gamma=self.gamma)
        if self.C <= 0.0:
            raise DomainError("C 必须大于 0", C=self.C)


@dataclass(frozen=True, slots=True)
class PhaseState:
    """某一相在 (p, rho) 处的完整热力学状态"""

    p: float
    rho: float
    T: float
    e: float
    s: float
    a: float
    g: float


@dataclass(frozen=True, slots=True)
class ConsistencyResiduals:
    """Gibbs 关系 dg/dp = 1/rho、dg/dT = -s 的中心差分残差"""

    pressure: float
    temperature: float
    pressure_relative: float
    temperature_relative: float


TABLE1_VAPOR = StiffenedGasParams(gamma=1.43, pi=0.0, C=1040.0, q=2.03e6, q_prime=-23000.0)
TABLE1_LIQUID = StiffenedGasParams(gamma=2.35, pi=1e9, C=1816.0, q=-1.167e6, q_prime=0.0)
# 空气，C 取定容比热
IDEAL_GAS = StiffenedGasParams(gamma=1.4, pi=0.0, C=717.5)

PRESETS: dict[str, StiffenedGasParams] = {
    "table1-vapor": TABLE1_VAPOR,
    "table1-liquid": TABLE1_LIQUID,
    "ideal-gas": IDEAL_GAS,
}


def _require_positive(value: ArrayLike, message: str, **context: Any) -> None:
    # NaN 也会被拒绝
    if not np.all(np.asarray(value) > 0.0):
        raise DomainError(message, **context)


def _offset_pressure(params: StiffenedGasParams, p: ArrayLike) -> Any:
    p_bar = np.add(p, params.pi)
    _require_positive(p_bar, "要求 p + pi > 0", p=p, pi=params.pi)
    return p_bar


def _log_ratio(params: StiffenedGasParams, p: ArrayLike, T: ArrayLike) -> Any:
    """ln(T^gamma / (p+pi)^(gamma-1))，按对数展开避免 T^gamma 溢出"""
    _require_positive(T, "要求 T > 0", T=T)
    p_bar = _offset_pressure(params, p)
    return params.gamma * np.log(T) - (params.gamma - 1.0) * np.log(p_bar)


def energy(params: StiffenedGasParams, p: ArrayLike, rho: ArrayLike) -> Any:
    _require_positive(rho, "要求 rho > 0", rho=rho)
    _offset_pressure(params, p)
    return np.add(p, params.gamma * params.pi) / np.multiply(rho, params.gamma - 1.0) + params.q


def temperature(params: StiffenedGasParams, p: ArrayLike, rho: ArrayLike) -> Any:
    _require_positive(rho, "要求 rho > 0", rho=rho)
    p_bar = _offset_pressure(params, p)
    return p_bar / (params.C * np.multiply(rho, params.gamma - 1.0))


def density_from_pT(params: StiffenedGasParams, p: ArrayLike, T: ArrayLike) -> Any:
    _require_positive(T, "要求 T > 0", T=T)
    p_bar = _offset_pressure(params, p)
    return p_bar / (params.C * np.multiply(T, params.gamma - 1.0))


def sound_speed(params: StiffenedGasParams, p: ArrayLike, rho: ArrayLike) -> Any:
    _require_positive(rho, "要求 rho > 0", rho=rho)
    p_bar = _offset_pressure(params, p)
    return np.sqrt(params.gamma * p_bar / rho)


def entropy(params: StiffenedGasParams, p: ArrayLike, T: ArrayLike) -> Any:
    return params.C * _log_ratio(params, p, T) + params.q_prime


def gibbs(params: StiffenedGasParams, p: ArrayLike, T: ArrayLike) -> Any:
    """g(p, T) 的闭式表达：C T gamma + q - C T ln(...) - T q'"""
    log_ratio = _log_ratio(params, p, T)
    CT = np.multiply(params.C, T)
    return CT * params.gamma + params.q - CT * log_ratio - np.multiply(T, params.q_prime)


def enthalpy(params: StiffenedGasParams, p: ArrayLike, rho: ArrayLike) -> Any:
    return energy(params, p, rho) + np.divide(p, rho)


def check_consistency(
    params: StiffenedGasParams, p: float, T: float, h: float = 1e-6
) -> ConsistencyResiduals:
    """用中心差分检验 dg/dp = 1/rho 与 dg/dT = -s

    压力步长取 h * (p + pi)，温度步长取 h * T，两者截断误差均为 O(h^2)。
    """
    if not 0.0 < h < 1e-3:
        raise DomainError("差分步长必须满足 0 < h < 1e-3", h=h)

    p_bar = float(_offset_pressure(params, p))
    _require_positive(T, "要求 T > 0", T=T)

    dp = h * p_bar
    dT = h * T
    # 扰动点同样需要落在可行域内
    if p_bar - dp <= 0.0 or T - dT <= 0.0:
        raise DomainError("扰动后的状态离开可行域", p=p, T=T, h=h)

    dg_dp = (gibbs(params, p + dp, T) - gibbs(params, p - dp, T)) / (2.0 * dp)
    dg_dT = (gibbs(params, p, T + dT) - gibbs(params, p, T - dT)) / (2.0 * dT)

    specific_volume = 1.0 / float(density_from_pT(params, p, T))
    s = float(entropy(params, p, T))

    pressure_residual = abs(float(dg_dp) - specific_volume)
    temperature_residual = abs(float(dg_dT) + s)
    return ConsistencyResiduals(
        pressure=pressure_residual,
        temperature=temperature_residual,
        pressure_relative=pressure_residual / specific_volume,
        temperature_relative=temperature_residual / max(abs(s), params.C),
    )


def phase_state(params: StiffenedGasParams, p: float, rho: float) -> PhaseState:
    T = float(temperature(params, p, rho))
    return PhaseState(
        p=float(p),
        rho=float(rho),
        T=T,
        e=float(energy(params, p, rho)),
        s=float(entropy(params, p, T)),
        a=float(sound_speed(params, p, rho)),
        g=float(gibbs(params, p, T)),
    )


def phase_state_from_pT(params: StiffenedGasParams, p: float, T: float) -> PhaseState:
    rho = float(density_from_pT(params, p, T))
    return PhaseState(
        p=float(p),
        rho=rho,
        T=float(T),
        e=float(energy(params, p, rho)),
        s=float(entropy(params, p, T)),
        a=float(sound_speed(params, p, rho)),
        g=float(gibbs(params, p, T)),
    )


def params_to_dict(params: StiffenedGasParams) -> dict[str, float]:
    return asdict(params)


def params_from_dict(payload: Any) -> StiffenedGasParams:
    if not isinstance(payload, dict):
        raise ConfigError("状态方程参数必须是 JSON 对象")
    missing = [key for key in PARAM_KEYS if key not in payload]
    if missing:
        raise ConfigError("状态方程参数缺少字段", missing=missing)
    try:
        values = {key: float(payload[key]) for key in PARAM_KEYS}
    except (TypeError, ValueError) as e:
        raise ConfigError(f"状态方程参数不是数字: {e}") from e
    try:
        return StiffenedGasParams(**values)
    except DomainError as e:
        raise ConfigError(e.message, **e.context) from e


def load_params_json(path: str | PathLike[str]) -> StiffenedGasParams:
    try:
        with open(path, encoding="utf-8") as f:
            payload = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError("参数文件不存在", path=str(path)) from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"参数文件不是合法 JSON: {e.msg}", path=str(path)) from e
    return params_from_dict(payload)


def get_preset(name: str) -> StiffenedGasParams:
    normalized = str(name or "").strip().lower()
    preset = PRESETS.get(normalized)
    if preset is None:
        raise ConfigError("未知的参数预设", preset=name, available=sorted(PRESETS))
    return preset
