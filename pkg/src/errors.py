"""
错误类型

exit_code 与命令行退出码对应：1 用法错误，2 数据/解析错误，3 计算退化。
"""
from typing import Optional


class LensMeterError(Exception):
    """基类"""

    exit_code = 2


class UsageError(LensMeterError):
    """命令行用法错误"""

    exit_code = 1


class InvalidInput(LensMeterError):
    """参数不合法（非有限数、非正焦距或像素尺寸等）"""

    exit_code = 2


class ParseError(LensMeterError):
    """会话文件解析错误，总是带1开始的行号"""

    exit_code = 2

    def __init__(self, reason: str, line: int, source: Optional[str] = None):
        self.reason = reason
        self.line = line
        self.source = source
        where = f"{source}:{line}" if source else f"line {line}"
        super().__init__(f"{where}: {reason}")


class GoldenMismatch(LensMeterError):
    """复现结果与参考表格不一致"""

    exit_code = 2


class DegenerateError(LensMeterError):
    """计算退化（分母为零等）"""

    exit_code = 3


class DegenerateGeometry(DegenerateError):
    """几何退化：像在无穷远、物距为零等"""


class DegenerateMagnification(DegenerateError):
    """放大率为0或1，焦距无法确定"""


class DegenerateObservation(DegenerateError):
    """两次观测像宽相同或位移为零"""


class ZeroWidth(DegenerateError):
    """像素数为零"""


class NotVirtual(DegenerateError):
    """该配置形成实像"""


class InconsistentKind(DegenerateError):
    """声明的透镜类型与f的符号矛盾"""


class InsufficientData(DegenerateError):
    """数据行不足，无法计算标准误差"""
