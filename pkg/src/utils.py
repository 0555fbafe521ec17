"""
工具函数
"""
import yaml
from pathlib import Path
from typing import Dict, Any, Optional
from datetime import datetime
from decimal import Decimal, ROUND_HALF_UP
import logging
import sys
import numpy as np
from dotenv import load_dotenv

load_dotenv()


def load_config(config_file: str = "config/config.yaml") -> Dict[str, Any]:
    """
    加载配置文件

    Args:
        config_file: 配置文件路径（相对项目根目录，或绝对路径）

    Returns:
        配置字典，文件不存在时返回空字典
    """
    config_path = Path(config_file)
    if not config_path.is_absolute():
        config_path = Path(__file__).parent.parent / config_file

    if not config_path.exists():
        return {}

    with open(config_path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def setup_logging(log_level: str = "INFO", log_dir: Optional[str] = None):
    """
    设置日志

    控制台日志写到stderr，stdout只留给报告数据。

    Args:
        log_level: 日志级别
        log_dir: 日志目录，为空时不写文件
    """
    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    date_format = "%Y-%m-%d %H:%M:%S"

    level = getattr(logging, log_level.upper(), logging.INFO)

    handlers = [logging.StreamHandler(sys.stderr)]
    if log_dir:
        log_path = Path(log_dir)
        log_path.mkdir(parents=True, exist_ok=True)
        handlers.append(
            logging.FileHandler(
                log_path / f"{datetime.now().strftime('%Y%m%d')}.log",
                encoding="utf-8"
            )
        )

    logging.basicConfig(
        level=level,
        format=log_format,
        datefmt=date_format,
        handlers=handlers,
        force=True
    )


def round_half_up(value: float, places: int) -> float:
    """
    四舍五入（0.5远离零），按十进制表示取整

    Args:
        value: 数值
        places: 小数位数

    Returns:
        取整后的浮点数
    """
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


def format_fixed(value: float, places: int) -> str:
    """
    按显示精度格式化（0.5远离零），例如 0.20587 -> "0.2059"

    Args:
        value: 数值
        places: 小数位数

    Returns:
        格式化字符串
    """
    quantum = Decimal(1).scaleb(-places)
    text = str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))
    # -0.0 之类的负零不显示负号
    if text.startswith("-") and Decimal(text) == 0:
        text = text[1:]
    return text


def make_rng(seed: int) -> np.random.Generator:
    """
    按种子创建独立的随机数生成器（PCG64，无全局状态）

    Args:
        seed: 非负整数种子

    Returns:
        numpy生成器
    """
    return np.random.Generator(np.random.PCG64(seed))

