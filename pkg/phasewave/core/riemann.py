"""刚性气体一维 Euler 方程的精确黎曼求解器

两侧共用同一组状态方程参数。所有波关系都写成偏移压力 p + pi 的形式，
此时刚性气体与理想气体的波关系同形。
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy import optimize

from .eos import StiffenedGasParams, density_from_pT, energy, sound_speed, temperature
from .errors import ConvergenceError, DomainError, VacuumError
from .log import logger
from .runtime import SolverSettings, resolve_solver_settings
from .waves import WaveKind, hugoniot_density_ratio

__all__ = [
    "PrimitiveState",
    "RiemannInput",
    "WaveInfo",
    "RiemannSolution",
    "RiemannProfile",
    "JumpResiduals",
    "solve",
    "sample",
    "sample_profile",
    "verify_rankine_hugoniot",
    "star_temperatures",
    "symmetric_piston_input",
]

STAR_RESIDUAL_RTOL = 1e-10


@dataclass(frozen=True, slots=True)
class PrimitiveState:
    rho: float
    u: float
    p: float


@dataclass(frozen=True, slots=True)
class RiemannInput:
    left: PrimitiveState
    right: PrimitiveState
    params: StiffenedGasParams

    def __post_init__(self) -> None:
        for side, state in (("left", self.left), ("right", self.right)):
            values = (state.rho, state.u, state.p)
            if not all(math.isfinite(v) for v in values):
                raise DomainError("初始状态必须是有限数", side=side)
            if state.rho <= 0.0:
                raise DomainError("要求 rho > 0", side=side, rho=state.rho)
            if state.p + self.params.pi <= 0.0:
                raise DomainError("要求 p + pi > 0", side=side, p=state.p)

    def mirrored(self) -> "RiemannInput":
        """左右互换且速度取反"""
        return RiemannInput(
            left=PrimitiveState(self.right.rho, -self.right.u, self.right.p),
            right=PrimitiveState(self.left.rho, -self.left.u, self.left.p),
            params=self.params,
        )


@dataclass(frozen=True, slots=True)
class WaveInfo:
    """单个非线性波；激波时 head_speed == tail_speed 即激波速度"""

    kind: str
    side: str
    head_speed: float
    tail_speed: float

    @property
    def speed(self) -> float:
        return self.head_speed


@dataclass(frozen=True, slots=True)
class RiemannSolution:
    p_star: float
    u_star: float
    rho_star_left: float
    rho_star_right: float
    left_wave: WaveInfo
    right_wave: WaveInfo
    contact_speed: float
    iterations: int = 0
    residual: float = 0.0


@dataclass(frozen=True, slots=True)
class RiemannProfile:
    xi: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    p: np.ndarray
    T: np.ndarray


@dataclass(frozen=True, slots=True)
class JumpResiduals:
    """激波两侧质量、动量、能量通量跳跃条件的相对残差"""

    side: str
    speed: float
    mass: float
    momentum: float
    energy: float

    @property
    def max_residual(self) -> float:
        return max(self.mass, self.momentum, self.energy)


@dataclass(frozen=True, slots=True)
class _SideData:
    rho: float
    u: float
    p_bar: float
    a: float


def _side_data(state: PrimitiveState, params: StiffenedGasParams) -> _SideData:
    return _SideData(
        rho=state.rho,
        u=state.u,
        p_bar=state.p + params.pi,
        a=float(sound_speed(params, state.p, state.rho)),
    )


def _pressure_function(p_bar: float, side: _SideData, gamma: float) -> tuple[float, float]:
    """单侧波函数 f_K(p_bar) 及其导数"""
    # 牛顿迭代可能越过 0
    p_bar = max(p_bar, np.finfo(float).tiny)
    if p_bar >= side.p_bar:
        A = 2.0 / ((gamma + 1.0) * side.rho)
        B = (gamma - 1.0) / (gamma + 1.0) * side.p_bar
        root = math.sqrt(A / (p_bar + B))
        f = (p_bar - side.p_bar) * root
        df = root * (1.0 - 0.5 * (p_bar - side.p_bar) / (B + p_bar))
        return f, df
    exponent = (gamma - 1.0) / (2.0 * gamma)
    ratio = p_bar / side.p_bar
    f = 2.0 * side.a / (gamma - 1.0) * (ratio**exponent - 1.0)
    df = ratio ** (-(gamma + 1.0) / (2.0 * gamma)) / (side.rho * side.a)
    return f, df


def _bracket(func, left: _SideData, right: _SideData, settings: SolverSettings) -> tuple[float, float]:
    # func 单调递增，p_bar -> 0 时趋于负值（非真空条件）
    lo = min(left.p_bar, right.p_bar)
    hi = max(left.p_bar, right.p_bar)
    for _ in range(settings.max_iterations):
        if func(lo) <= 0.0:
            break
        lo *= 0.5
    for _ in range(settings.max_iterations):
        if func(hi) >= 0.0:
            break
        hi *= 2.0
    if func(lo) > 0.0 or func(hi) < 0.0:
        raise ConvergenceError("无法为星区压力建立求根区间", bracket=(lo, hi))
    return lo, hi


def solve(
    problem: RiemannInput, settings: SolverSettings | None = None
) -> RiemannSolution:
    """求星区压力与速度

    Newton 迭代使用解析导数，初值取线性化（PVRS）估计；
    Newton 未收敛或跳出区间时退回 brentq。
    """
    settings = settings or resolve_solver_settings()
    params = problem.params
    gamma = params.gamma
    left = _side_data(problem.left, params)
    right = _side_data(problem.right, params)
    du = right.u - left.u

    if 2.0 * (left.a + right.a) / (gamma - 1.0) <= du:
        raise VacuumError(
            "初始数据会产生真空",
            du=du,
            critical=2.0 * (left.a + right.a) / (gamma - 1.0),
        )

    def func(p_bar: float) -> float:
        return _pressure_function(p_bar, left, gamma)[0] + _pressure_function(p_bar, right, gamma)[0] + du

    def fprime(p_bar: float) -> float:
        return _pressure_function(p_bar, left, gamma)[1] + _pressure_function(p_bar, right, gamma)[1]

    lo, hi = _bracket(func, left, right, settings)
    pvrs = 0.5 * (left.p_bar + right.p_bar) - 0.125 * du * (left.rho + right.rho) * (left.a + right.a)
    guess = min(max(pvrs, lo), hi)

    p_bar_star: float | None = None
    iterations = 0
    if func(guess) == 0.0:
        p_bar_star = guess
    else:
        root, result = optimize.newton(
            func,
            guess,
            fprime=fprime,
            tol=1e-15 * hi,
            rtol=4.0 * np.finfo(float).eps,
            maxiter=settings.max_iterations,
            full_output=True,
            disp=False,
        )
        iterations = result.iterations
        if result.converged and lo <= root <= hi:
            p_bar_star = float(root)
        else:
            logger.warning("[Riemann] Newton 迭代未收敛，退回 brentq 二分")
            root, info = optimize.brentq(
                func,
                lo,
                hi,
                xtol=1e-300,
                rtol=4.0 * np.finfo(float).eps,
                maxiter=settings.max_iterations,
                full_output=True,
                disp=False,
            )
            iterations += info.iterations
            if not info.converged:
                raise ConvergenceError("星区压力迭代未收敛", iterations=iterations)
            p_bar_star = float(root)

    f_left = _pressure_function(p_bar_star, left, gamma)[0]
    f_right = _pressure_function(p_bar_star, right, gamma)[0]
    residual = abs(f_left + f_right + du) / (left.a + right.a)
    if residual >= STAR_RESIDUAL_RTOL:
        raise ConvergenceError("星区压力残差超出容差", residual=residual)

    p_star = p_bar_star - params.pi
    u_star = 0.5 * (left.u + right.u) + 0.5 * (f_right - f_left)
    rho_left, left_wave = _star_side(problem.left, left, p_bar_star, u_star, params, "left")
    rho_right, right_wave = _star_side(problem.right, right, p_bar_star, u_star, params, "right")

    solution = RiemannSolution(
        p_star=p_star,
        u_star=u_star,
        rho_star_left=rho_left,
        rho_star_right=rho_right,
        left_wave=left_wave,
        right_wave=right_wave,
        contact_speed=u_star,
        iterations=iterations,
        residual=residual,
    )
    logger.debug(
        f"[Riemann] p*={p_star:.10g}, u*={u_star:.10g}, "
        f"左波={left_wave.kind}, 右波={right_wave.kind}, 迭代={iterations}"
    )
    return solution


def _star_side(
    state: PrimitiveState,
    side: _SideData,
    p_bar_star: float,
    u_star: float,
    params: StiffenedGasParams,
    name: str,
) -> tuple[float, WaveInfo]:
    gamma = params.gamma
    sign = -1.0 if name == "left" else 1.0
    if p_bar_star >= side.p_bar:
        ratio = float(
            hugoniot_density_ratio(params, state.p, p_bar_star - params.pi, allow_expansive=True)
        )
        rho_star = state.rho * ratio
        shock_speed = side.u + sign * side.a * math.sqrt(
            (gamma + 1.0) / (2.0 * gamma) * p_bar_star / side.p_bar + (gamma - 1.0) / (2.0 * gamma)
        )
        return rho_star, WaveInfo(WaveKind.SHOCK, name, shock_speed, shock_speed)

    rho_star = state.rho * (p_bar_star / side.p_bar) ** (1.0 / gamma)
    a_star = side.a * (p_bar_star / side.p_bar) ** ((gamma - 1.0) / (2.0 * gamma))
    head = side.u + sign * side.a
    tail = u_star + sign * a_star
    return rho_star, WaveInfo(WaveKind.RAREFACTION, name, head, tail)


def _fan_state(
    state: PrimitiveState, params: StiffenedGasParams, xi: float, name: str
) -> PrimitiveState:
    gamma = params.gamma
    a = float(sound_speed(params, state.p, state.rho))
    p_bar = state.p + params.pi
    sign = 1.0 if name == "left" else -1.0
    c = 2.0 / (gamma + 1.0) + sign * (gamma - 1.0) / ((gamma + 1.0) * a) * (state.u - xi)
    rho = state.rho * c ** (2.0 / (gamma - 1.0))
    u = 2.0 / (gamma + 1.0) * (sign * a + 0.5 * (gamma - 1.0) * state.u + xi)
    p = p_bar * c ** (2.0 * gamma / (gamma - 1.0)) - params.pi
    return PrimitiveState(rho, u, p)


def sample(solution: RiemannSolution, problem: RiemannInput, xi: float) -> PrimitiveState:
    """在 x/t = xi 处取自相似解"""
    if xi <= solution.contact_speed:
        state, wave, rho_star, name = (
            problem.left,
            solution.left_wave,
            solution.rho_star_left,
            "left",
        )
        outside = xi < wave.head_speed
        inside_star = xi >= wave.tail_speed
    else:
        state, wave, rho_star, name = (
            problem.right,
            solution.right_wave,
            solution.rho_star_right,
            "right",
        )
        outside = xi > wave.head_speed
        inside_star = xi <= wave.tail_speed

    if wave.kind == WaveKind.SHOCK:
        if outside:
            return state
        return PrimitiveState(rho_star, solution.u_star, solution.p_star)

    if outside:
        return state
    if inside_star:
        return PrimitiveState(rho_star, solution.u_star, solution.p_star)
    return _fan_state(state, problem.params, xi, name)


def sample_profile(
    solution: RiemannSolution, problem: RiemannInput, xi_values: ArrayLike
) -> RiemannProfile:
    xi = np.asarray(xi_values, dtype=float).reshape(-1)
    states = [sample(solution, problem, float(x)) for x in xi]
    rho = np.array([s.rho for s in states])
    p = np.array([s.p for s in states])
    return RiemannProfile(
        xi=xi,
        rho=rho,
        u=np.array([s.u for s in states]),
        p=p,
        T=np.asarray(temperature(problem.params, p, rho), dtype=float),
    )


def _conserved_and_flux(state: PrimitiveState, params: StiffenedGasParams):
    e = float(energy(params, state.p, state.rho))
    total = state.rho * (e + 0.5 * state.u**2)
    conserved = np.array([state.rho, state.rho * state.u, total])
    flux = np.array(
        [
            state.rho * state.u,
            state.rho * state.u**2 + state.p,
            state.u * (total + state.p),
        ]
    )
    return conserved, flux


def verify_rankine_hugoniot(
    solution: RiemannSolution, problem: RiemannInput
) -> list[JumpResiduals]:
    """对每道激波检查 F(W*) - F(W_K) = S (U* - U_K)"""
    residuals: list[JumpResiduals] = []
    for wave, state, rho_star in (
        (solution.left_wave, problem.left, solution.rho_star_left),
        (solution.right_wave, problem.right, solution.rho_star_right),
    ):
        if wave.kind != WaveKind.SHOCK:
            continue
        star = PrimitiveState(rho_star, solution.u_star, solution.p_star)
        U_k, F_k = _conserved_and_flux(state, problem.params)
        U_s, F_s = _conserved_and_flux(star, problem.params)
        S = wave.speed
        jump = np.abs(F_s - F_k - S * (U_s - U_k))
        scale = np.abs(F_s) + np.abs(F_k) + abs(S) * (np.abs(U_s) + np.abs(U_k))
        relative = np.where(scale > 0.0, jump / np.where(scale > 0.0, scale, 1.0), 0.0)
        residuals.append(
            JumpResiduals(
                side=wave.side,
                speed=S,
                mass=float(relative[0]),
                momentum=float(relative[1]),
                energy=float(relative[2]),
            )
        )
    return residuals


def star_temperatures(solution: RiemannSolution, problem: RiemannInput) -> tuple[float, float]:
    params = problem.params
    return (
        float(temperature(params, solution.p_star, solution.rho_star_left)),
        float(temperature(params, solution.p_star, solution.rho_star_right)),
    )


def symmetric_piston_input(
    params: StiffenedGasParams, p: float, T: float, speed: float
) -> RiemannInput:
    """对称活塞替代问题：speed > 0 两侧相向运动（压缩），speed < 0 相背运动（膨胀）"""
    rho = float(density_from_pT(params, p, T))
    return RiemannInput(
        left=PrimitiveState(rho, float(speed), float(p)),
        right=PrimitiveState(rho, -float(speed), float(p)),
        params=params,
    )
