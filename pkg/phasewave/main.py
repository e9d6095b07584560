"""phasewave 命令行入口

子命令：satcurve、wavecurve、verify、fit、riemann、table。
退出码：0 成功，1 定理严格性断言失败，2 用法/配置/输入错误，3 物理定义域或数值错误。
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .converters.input_converter import InputConverter
from .converters.output_converter import OutputConverter
from .core.diagnostics import (
    summarize_intersection,
    summarize_params,
    summarize_riemann_solution,
    summarize_theorem_report,
)
from .core.errors import EXIT_ASSERTION_FAILED, EXIT_OK, EXIT_USAGE, ConfigError, PhaseWaveError
from .core.log import logger
from .core.riemann import (
    RiemannInput,
    sample_profile,
    solve,
    star_temperatures,
    verify_rankine_hugoniot,
)
from .core.runtime import (
    T_CRIT,
    T_TRIPLE,
    load_runtime_config,
    resolve_solver_settings,
    resolve_table_path,
)
from .core.saturation import SaturationCurve, saturation_curve
from .core.steamtable import (
    SteamTable,
    build_table_iapws97,
    dump_table,
    fit_curve,
    load_table,
    table_saturation_curve,
)
from .core.waves import WaveKind, rarefaction_curve
from .services.analysis import (
    CavitationKind,
    classify_cavitation,
    entropy_separation,
    survey_cavitation,
    trace_compression,
    vapor_mass_fraction_bound,
    verify_condensation_fitted,
    verify_condensation_table1,
    verify_strong_cavitation_fitted,
)

COMMANDS = ("satcurve", "wavecurve", "verify", "fit", "riemann", "table")
VERIFY_MODES = ("table1", "fitted", "all")

# 质量分数上界允许的蒸汽表离散误差
MU_BOUND = 0.5
MU_TOLERANCE = 0.005

# 液相膨胀空化分类的锚点温度 [K]
CAVITATION_SURVEY_T = tuple(float(T) for T in range(300, 601, 25))

_handler: logging.Handler | None = None


@dataclass(slots=True)
class RunConfig:
    command: str
    params: str | None = None
    table: str | None = None
    tmin: float | None = None
    tmax: float | None = None
    n: int | None = None
    out: str | None = None
    format: str = "csv"
    options: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        common = {"command", "params", "table", "tmin", "tmax", "n", "out", "format", "config", "verbose"}
        options = {key: value for key, value in vars(args).items() if key not in common}
        return cls(
            command=args.command,
            params=args.params,
            table=args.table,
            tmin=args.tmin,
            tmax=args.tmax,
            n=args.n,
            out=args.out,
            format=args.format,
            options=options,
        )

    def window(self, default_min: float, default_max: float, default_n: int) -> tuple[float, float, int]:
        tmin = default_min if self.tmin is None else float(self.tmin)
        tmax = default_max if self.tmax is None else float(self.tmax)
        n = default_n if self.n is None else int(self.n)
        if n < 1:
            raise ConfigError("--n 必须 >= 1", n=n)
        if tmin > tmax:
            raise ConfigError("--tmin 不能大于 --tmax", tmin=tmin, tmax=tmax)
        return tmin, tmax, n


def configure_logging(verbose: bool) -> None:
    global _handler
    if _handler is not None:
        logger.removeHandler(_handler)
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    logger.addHandler(_handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError("必须是正整数")
    return number


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", help="参数预设名、JSON 参数文件或 <vapor>,<liquid>")
    common.add_argument("--table", help="蒸汽表 CSV（默认取 PHASEWAVE_TABLE）")
    common.add_argument("--tmin", type=float, help="温度窗口下限 [K]")
    common.add_argument("--tmax", type=float, help="温度窗口上限 [K]")
    common.add_argument("--n", type=_positive_int, help="采样点数")
    common.add_argument("--out", help="输出文件路径，缺省写到标准输出")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="输出格式")
    common.add_argument("--config", help="JSON 运行时配置文件")
    common.add_argument("--verbose", action="store_true", help="输出调试日志")

    parser = argparse.ArgumentParser(
        prog="phasewave",
        description="刚性气体两相热力学、波曲线与黎曼问题的数值工具",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("satcurve", parents=[common], help="饱和曲线 p_sat(T)")

    wave = sub.add_parser("wavecurve", parents=[common], help="激波/稀疏波曲线与饱和线交点")
    wave.add_argument("--anchor", required=True, help="锚点 p,T")
    wave.add_argument("--kind", choices=(WaveKind.SHOCK, WaveKind.RAREFACTION), default=WaveKind.SHOCK)
    wave.add_argument("--p-end", type=float, required=True, help="曲线终点压力 [Pa]")
    wave.add_argument("--saturation", default="table1", help="饱和线的两相参数（给出 --table 时改用蒸汽表）")

    verify = sub.add_parser("verify", parents=[common], help="验证凝结与强空化不可能性")
    verify.add_argument("--mode", choices=VERIFY_MODES, default="table1")

    sub.add_parser("fit", parents=[common], help="蒸汽表局部最优参数")

    riemann = sub.add_parser("riemann", parents=[common], help="精确黎曼求解")
    riemann.add_argument("--left", required=True, help="左状态 rho,u,p")
    riemann.add_argument("--right", required=True, help="右状态 rho,u,p")
    riemann.add_argument("--profile", help="剖面 CSV 输出路径 (xi,rho,u,p,T)")
    riemann.add_argument("--xi-min", type=float, default=-1.0)
    riemann.add_argument("--xi-max", type=float, default=1.0)
    riemann.add_argument("--samples", type=_positive_int, default=201)

    table = sub.add_parser("table", parents=[common], help="由 IAPWS-IF97 生成饱和线蒸汽表")
    table.add_argument("--step", type=float, default=1.0, help="温度步长 [K]")
    return parser


class PhaseWaveCLI:
    """命令分发；每个 cmd_* 返回进程退出码"""

    def __init__(self):
        self.inputs = InputConverter()
        self.settings = resolve_solver_settings()

    def _emit(self, text: str, out: str | None) -> None:
        if out:
            Path(out).write_text(text, encoding="utf-8", newline="\n")
            logger.info(f"[CLI] 已写入 {out}")
        else:
            sys.stdout.write(text)

    def _load_table(self, config: RunConfig) -> SteamTable:
        path = resolve_table_path(config.table)
        if not path:
            raise ConfigError("需要蒸汽表：使用 --table、PHASEWAVE_TABLE 或 paths.table")
        return load_table(path)

    def _saturation_from_pair(self, source: str | None) -> SaturationCurve:
        vapor, liquid = self.inputs.resolve_phase_pair(source)
        return saturation_curve(vapor, liquid, self.settings.t_min, self.settings.t_max, 64, self.settings)

    def cmd_satcurve(self, config: RunConfig) -> int:
        vapor, liquid = self.inputs.resolve_phase_pair(config.params)
        logger.debug(f"[CLI] 饱和曲线参数 vapor={summarize_params(vapor)}, liquid={summarize_params(liquid)}")
        tmin, tmax, n = config.window(T_TRIPLE, T_CRIT, 200)
        if n < 2:
            raise ConfigError("饱和曲线至少需要 2 个点", n=n)
        curve = saturation_curve(vapor, liquid, tmin, tmax, n, self.settings)
        self._emit(OutputConverter(config.format).render_saturation_curve(curve), config.out)
        return EXIT_OK

    def cmd_wavecurve(self, config: RunConfig) -> int:
        params = self.inputs.resolve_params(config.params or "table1-vapor")
        p_hat, T_hat = self.inputs.parse_anchor(config.options.get("anchor"))
        p_end = float(config.options["p_end"])
        if config.table:
            sat = table_saturation_curve(self._load_table(config), self.settings)
        else:
            sat = self._saturation_from_pair(config.options.get("saturation"))

        if config.options.get("kind") == WaveKind.RAREFACTION:
            cavitation = classify_cavitation(params, sat, p_hat, T_hat, p_end, self.settings)
            curve = rarefaction_curve(params, p_hat, T_hat, p_end)
            report = cavitation.intersection
        else:
            trace = trace_compression(params, sat, p_hat, T_hat, p_end, self.settings)
            curve, report = trace.curve, trace.report
        logger.debug(f"[CLI] 波曲线相交检测: {summarize_intersection(report)}")

        n = 200 if config.n is None else max(int(config.n), 2)
        text = OutputConverter(config.format).render_wave_curve(curve.sampled(n), report)
        self._emit(text, config.out)
        return EXIT_OK

    def cmd_verify(self, config: RunConfig) -> int:
        mode = config.options.get("mode", "table1")
        reports = []
        extras: dict[str, Any] = {}
        passed = True

        if mode in ("table1", "all"):
            vapor, liquid = self.inputs.resolve_phase_pair(config.params)
            tmin, tmax, n = config.window(274.0, 645.0, 500)
            report = verify_condensation_table1(tmin, tmax, n, vapor, liquid, self.settings)
            reports.append(report)
            passed = passed and report.all_strict and bool(report.sign_conditions_hold)

        if mode in ("fitted", "all"):
            table = self._load_table(config)
            tmin, tmax, n = config.window(274.0, 646.0, 373)
            report = verify_condensation_fitted(table, tmin, tmax, n, self.settings)
            reports.append(report)
            bound = vapor_mass_fraction_bound(table)
            separation = entropy_separation(table)
            extras["mass_fraction"] = bound
            extras["entropy_separation"] = {
                "s_crit": separation.s_crit,
                "max_s_liquid": separation.max_s_liquid,
                "min_s_vapor": separation.min_s_vapor,
                "holds": separation.holds,
            }
            passed = (
                passed
                and report.all_strict
                and separation.holds
                and bound.mu_max <= MU_BOUND + MU_TOLERANCE
            )

            cavitation = verify_strong_cavitation_fitted(table, tmin, tmax, n, self.settings)
            reports.append(cavitation)
            t_lo, t_hi = table.temperature_range
            anchors = [T for T in CAVITATION_SURVEY_T if t_lo <= T <= t_hi]
            survey = survey_cavitation(table, anchors, settings=self.settings)
            extras["cavitation"] = list(survey)
            passed = (
                passed
                and cavitation.all_strict
                and all(r.kind in (CavitationKind.NONE, CavitationKind.WEAK) for r in survey)
            )

        for report in reports:
            logger.info(f"[CLI] 验证结果: {summarize_theorem_report(report)}")
        self._emit(OutputConverter(config.format).render_verification(reports, extras), config.out)
        if not passed:
            logger.error("[CLI] 严格性断言失败")
            return EXIT_ASSERTION_FAILED
        return EXIT_OK

    def cmd_fit(self, config: RunConfig) -> int:
        table = self._load_table(config)
        t_lo, t_hi = table.temperature_range
        tmin, tmax, n = config.window(t_lo, t_hi, len(table))
        fits = fit_curve(table, tmin, tmax, n, self.settings)
        self._emit(OutputConverter(config.format).render_fits(fits), config.out)
        return EXIT_OK

    def cmd_riemann(self, config: RunConfig) -> int:
        params = self.inputs.resolve_params(config.params or "ideal-gas")
        problem = RiemannInput(
            left=self.inputs.parse_state(config.options.get("left")),
            right=self.inputs.parse_state(config.options.get("right")),
            params=params,
        )
        solution = solve(problem, self.settings)
        logger.debug(f"[CLI] 黎曼解: {summarize_riemann_solution(solution)}")
        output = OutputConverter("json")
        payload = output.riemann_payload(
            solution,
            problem,
            star_temperatures(solution, problem),
            verify_rankine_hugoniot(solution, problem),
        )
        self._emit(output.render_riemann(payload), config.out)

        profile_path = config.options.get("profile")
        if profile_path:
            xi = np.linspace(
                config.options.get("xi_min", -1.0),
                config.options.get("xi_max", 1.0),
                config.options.get("samples", 201),
            )
            profile = sample_profile(solution, problem, xi)
            self._emit(OutputConverter("csv").render_profile(profile), profile_path)
        return EXIT_OK

    def cmd_table(self, config: RunConfig) -> int:
        tmin, tmax, _ = config.window(T_TRIPLE, 647.0, 1)
        table = build_table_iapws97(tmin, tmax, float(config.options.get("step", 1.0)))
        if config.out:
            dump_table(table, config.out)
            logger.info(f"[CLI] 已写入 {config.out}")
        else:
            dump_table(table, sys.stdout)
        return EXIT_OK

    def run(self, config: RunConfig) -> int:
        handler = getattr(self, f"cmd_{config.command}", None)
        if config.command not in COMMANDS or handler is None:
            raise ConfigError("未知的子命令", command=config.command)
        return handler(config)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(bool(args.verbose))
    try:
        if args.config:
            load_runtime_config(args.config)
        config = RunConfig.from_args(args)
        return PhaseWaveCLI().run(config)
    except PhaseWaveError as e:
        logger.error(f"[CLI] {type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"[CLI] 文件读写失败: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
