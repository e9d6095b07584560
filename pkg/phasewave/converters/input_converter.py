"""输入转换器 - 将命令行参数转换为状态方程参数与初始状态"""

from __future__ import annotations

import json
from pathlib import Path

from ..core.eos import PRESETS, StiffenedGasParams, get_preset, load_params_json, params_from_dict
from ..core.errors import ConfigError
from ..core.log import logger
from ..core.riemann import PrimitiveState

PAIR_PRESETS: dict[str, tuple[str, str]] = {
    "table1": ("table1-vapor", "table1-liquid"),
}


class InputConverter:
    """输入转换器 - 预设名、JSON 参数文件和 "a,b,c" 形式的状态字符串"""

    def resolve_params(self, source: str | None) -> StiffenedGasParams:
        """单相参数：预设名或 JSON 文件路径"""
        text = str(source or "").strip()
        if not text:
            raise ConfigError("缺少状态方程参数")
        if text.lower() in PRESETS:
            return get_preset(text)
        path = Path(text)
        if path.suffix.lower() == ".json" or path.exists():
            return load_params_json(path)
        raise ConfigError("未知的参数预设或文件", params=text, available=sorted(PRESETS))

    def resolve_phase_pair(
        self, source: str | None
    ) -> tuple[StiffenedGasParams, StiffenedGasParams]:
        """两相参数

        接受 "table1"、"<vapor>,<liquid>" 或含 vapor/liquid 两个对象的 JSON 文件。
        """
        text = str(source or "table1").strip()
        preset = PAIR_PRESETS.get(text.lower())
        if preset is not None:
            return get_preset(preset[0]), get_preset(preset[1])

        if "," in text:
            vapor_source, _, liquid_source = text.partition(",")
            return self.resolve_params(vapor_source), self.resolve_params(liquid_source)

        path = Path(text)
        if not path.exists():
            raise ConfigError(
                "未知的两相参数来源", params=text, available=sorted(PAIR_PRESETS)
            )
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"参数文件不是合法 JSON: {e.msg}", path=text) from e
        if not isinstance(payload, dict) or "vapor" not in payload or "liquid" not in payload:
            raise ConfigError("两相参数文件需要 vapor 与 liquid 两个对象", path=text)
        logger.debug(f"[CLI] 从 {text} 读取两相参数")
        return params_from_dict(payload["vapor"]), params_from_dict(payload["liquid"])

    def _parse_numbers(self, text: str | None, count: int, label: str) -> list[float]:
        parts = [part.strip() for part in str(text or "").split(",")]
        if len(parts) != count or not all(parts):
            raise ConfigError(f"{label} 需要 {count} 个逗号分隔的数值", value=text)
        try:
            return [float(part) for part in parts]
        except ValueError as e:
            raise ConfigError(f"{label} 包含非数值项", value=text) from e

    def parse_state(self, text: str | None) -> PrimitiveState:
        """"rho,u,p" -> PrimitiveState"""
        rho, u, p = self._parse_numbers(text, 3, "状态")
        return PrimitiveState(rho=rho, u=u, p=p)

    def parse_anchor(self, text: str | None) -> tuple[float, float]:
        """"p,T" -> (p, T)"""
        p, T = self._parse_numbers(text, 2, "锚点")
        return p, T
