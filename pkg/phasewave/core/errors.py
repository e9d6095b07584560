"""phasewave 错误类型定义

所有错误都携带 message 与 context，CLI 通过 exit_code 决定进程退出码：
0 成功，1 定理严格性断言失败，2 用法/配置/输入错误，3 物理定义域或数值错误。
"""

from __future__ import annotations

from typing import Any

__all__ = [
    "EXIT_OK",
    "EXIT_ASSERTION_FAILED",
    "EXIT_USAGE",
    "EXIT_DOMAIN",
    "PhaseWaveError",
    "DomainError",
    "BracketError",
    "ConvergenceError",
    "OutOfRangeError",
    "DegenerateError",
    "RegionError",
    "VacuumError",
    "TableParseError",
    "TableValidationError",
    "ConfigError",
]

EXIT_OK = 0
EXIT_ASSERTION_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3


class PhaseWaveError(Exception):
    """phasewave 错误基类"""

    exit_code = EXIT_DOMAIN

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: dict[str, Any] = context

    def with_context(self, **extra: Any) -> "PhaseWaveError":
        """返回附加上下文后的同类型错误副本"""
        merged = {**self.context, **extra}
        clone = self.__class__(self.message, **merged)
        clone.__cause__ = self
        return clone

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{key}={value!r}" for key, value in self.context.items())
        return f"{self.message} ({details})"


class DomainError(PhaseWaveError, ValueError):
    """状态超出可行域，例如 rho <= 0 或 p + pi <= 0"""


class BracketError(PhaseWaveError):
    """求根区间内不存在变号"""


class ConvergenceError(PhaseWaveError):
    """迭代在最大次数内未收敛"""


class OutOfRangeError(PhaseWaveError):
    """输入超出可求解或表格覆盖的范围"""


class DegenerateError(PhaseWaveError):
    """分母退化或拟合得到不可接受的参数"""


class RegionError(PhaseWaveError):
    """初始状态不在要求的相区内"""

    exit_code = EXIT_USAGE


class VacuumError(PhaseWaveError):
    """黎曼问题会产生真空"""


class TableParseError(PhaseWaveError):
    """蒸汽表 CSV 解析失败"""

    exit_code = EXIT_USAGE


class TableValidationError(PhaseWaveError):
    """蒸汽表内容校验失败（单调性、物理合理性）"""

    exit_code = EXIT_USAGE


class ConfigError(PhaseWaveError):
    """命令行或配置文件错误"""

    exit_code = EXIT_USAGE
