"""phasewave - 刚性气体两相热力学与波曲线分析工具"""

__version__ = "0.1.0"
