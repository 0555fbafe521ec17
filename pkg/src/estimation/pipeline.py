"""
测量流程：像素数 -> 传感器像宽 I1, I2 -> 虚像宽度 I -> 放大率 m -> 焦距 f
"""
import logging
import math
from typing import Iterable, List, Optional, Tuple

import numpy as np

from src.errors import DegenerateGeometry, InconsistentKind, InsufficientData, InvalidInput
from src.models import (
    AggregateResult,
    CameraSpec,
    EstimateRow,
    LensKind,
    ObjectSpec,
    ObservationRow,
    RoundingMode,
    Session,
)
from src.optics.core import (
    camera_object_distance,
    focal_from_distances,
    focal_from_magnification,
    width_two_position,
)
from src.optics.sensor import pixels_to_width
from src.utils import round_half_up

logger = logging.getLogger(__name__)

# 表格复现模式下各中间量的显示精度
TABLE_PLACES = {"I1": 4, "I2": 4, "I": 2, "f": 1}

DEFAULT_MIN_PIXEL_CONTRAST = 0.05


def focal_length_from_widths(
    f_c: float, width_O: float, distance_u: float, I1: float, I2: float, D: float
) -> float:
    """
    全精度闭式解：两位置法求I，m = I/O，再由放大率求f

    蒙特卡洛直接调用这里，不构造模型对象。
    """
    I = width_two_position(D, f_c, I1, I2)
    return focal_from_magnification(distance_u, I / width_O)


def focal_length_array(
    f_c: float, width_O: float, distance_u: np.ndarray, I1: np.ndarray, I2: np.ndarray, D: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    focal_length_from_widths 的数组版本，逐元素运算顺序与标量版本一致

    Args:
        f_c: 相机镜头焦距
        width_O: 物体宽度
        distance_u: 物距数组
        I1: 第一位置传感器像宽数组
        I2: 第二位置传感器像宽数组
        D: 相机位移数组

    Returns:
        (焦距数组, 有效掩码)，无效位置的焦距为nan
    """
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ok = (I1 > 0) & (I2 > 0) & (D != 0) & (I1 != I2) & (distance_u != 0)
        ok &= np.isfinite(I1) & np.isfinite(I2) & np.isfinite(D) & np.isfinite(distance_u)
        I = np.abs(D) / (f_c * np.abs(1.0 / I2 - 1.0 / I1))
        m = I / width_O
        ok &= np.isfinite(m) & (m != 0)
        denominator = 1.0 / m - 1.0
        ok &= denominator != 0
        f = distance_u / denominator
        ok &= np.isfinite(f)
    return np.where(ok, f, np.nan), ok


def estimate_from_widths(
    camera: CameraSpec,
    object_spec: ObjectSpec,
    I1: float,
    I2: float,
    D: float,
    D1: float,
    mode: RoundingMode = RoundingMode.FULL_PRECISION,
    lens_kind: Optional[LensKind] = None,
    obs: Optional[ObservationRow] = None,
) -> EstimateRow:
    """
    由两个传感器像宽估计焦距

    Args:
        camera: 相机参数
        object_spec: 物体宽度和物距
        I1: 第一位置传感器像宽 cm
        I2: 第二位置传感器像宽 cm
        D: 相机位移 cm
        D1: 第一位置相机到透镜的距离 cm
        mode: 精度模式
        lens_kind: 声明的透镜类型，给出时校验f的符号
        obs: 原始观测行

    Returns:
        EstimateRow
    """
    f_c = camera.focal_length_fc
    O = object_spec.width_O
    u = object_spec.distance_u
    table = mode == RoundingMode.TABLE_REPRODUCTION

    if table:
        I1 = round_half_up(I1, TABLE_PLACES["I1"])
        I2 = round_half_up(I2, TABLE_PLACES["I2"])

    I = width_two_position(D, f_c, I1, I2)
    if table:
        I = round_half_up(I, TABLE_PLACES["I"])

    m = I / O
    f = focal_from_magnification(u, m)
    if table:
        f = round_half_up(f, TABLE_PLACES["f"])

    if lens_kind is not None and LensKind.from_focal_length(f) != lens_kind:
        raise InconsistentKind(
            f"declared {lens_kind.value} lens but estimated f = {f:.4f} cm"
        )

    # 虚像位置：v = m·u，另由第一位置相机的物距独立定出
    v = m * u
    v_camera = -(camera_object_distance(f_c, I1 / I) - D1)
    try:
        f_position = focal_from_distances(u, v_camera)
    except DegenerateGeometry as e:
        logger.debug(f"由像位置求焦距失败: {e}")
        f_position = None

    return EstimateRow(
        obs=obs,
        I1=I1,
        I2=I2,
        I=I,
        m=m,
        f=f,
        v=v,
        v_camera=v_camera,
        f_position=f_position,
        rounding_mode=mode,
    )


def estimate_row(
    camera: CameraSpec,
    object_spec: ObjectSpec,
    obs: ObservationRow,
    mode: RoundingMode = RoundingMode.FULL_PRECISION,
    lens_kind: Optional[LensKind] = None,
    min_pixel_contrast: float = DEFAULT_MIN_PIXEL_CONTRAST,
) -> EstimateRow:
    """
    单行估计：像素数换算像宽后走两位置法

    Args:
        camera: 相机参数
        object_spec: 物体参数
        obs: 观测行
        mode: 精度模式
        lens_kind: 声明的透镜类型
        min_pixel_contrast: 两次像素数相对差低于此值时告警

    Returns:
        EstimateRow

    Raises:
        DegenerateObservation: pixel1 = pixel2
        DegenerateMagnification: I = O
        InconsistentKind: 透镜类型与f符号矛盾
    """
    largest = max(obs.pixel1, obs.pixel2)
    if largest > 0 and abs(obs.pixel1 - obs.pixel2) / largest < min_pixel_contrast:
        logger.warning(
            f"第{obs.obs_no}行两次像素数过于接近 ({obs.pixel1}, {obs.pixel2})，"
            f"位移D={obs.D}cm可能太小"
        )

    I1 = pixels_to_width(obs.pixel1, camera.pixel_pitch)
    I2 = pixels_to_width(obs.pixel2, camera.pixel_pitch)
    return estimate_from_widths(
        camera, object_spec, I1, I2, obs.D, obs.D1,
        mode=mode, lens_kind=lens_kind, obs=obs,
    )


def estimate_session(
    session: Session,
    mode: RoundingMode = RoundingMode.FULL_PRECISION,
    kind_check: bool = True,
    min_pixel_contrast: float = DEFAULT_MIN_PIXEL_CONTRAST,
) -> List[EstimateRow]:
    """对会话中的每一行做估计"""
    lens_kind = session.lens_kind if kind_check else None
    rows = [
        estimate_row(
            session.camera, session.object, obs, mode,
            lens_kind=lens_kind, min_pixel_contrast=min_pixel_contrast,
        )
        for obs in session.rows
    ]
    logger.info(f"估计完成: {len(rows)} 行, 模式 {mode.value}")
    return rows


def aggregate(
    rows: Iterable[EstimateRow],
    allow_single: bool = False,
    lens_kind: Optional[LensKind] = None,
) -> AggregateResult:
    """
    汇总多行结果：f 的算术平均和平均值标准误差（n-1 样本方差）

    Args:
        rows: 单行结果，按行序
        allow_single: 允许只有一行（此时sem为None）
        lens_kind: 透镜类型，仅用于报告表头

    Returns:
        AggregateResult

    Raises:
        InsufficientData: 行数不足
    """
    rows = tuple(rows)
    n = len(rows)
    if n == 0 or (n < 2 and not allow_single):
        raise InsufficientData(f"need at least 2 rows to aggregate, got {n}")

    modes = {row.rounding_mode for row in rows}
    if len(modes) != 1:
        raise InvalidInput("rows computed in different rounding modes")

    values = np.array([row.f for row in rows], dtype=float)
    mean_f = float(np.mean(values))
    if n >= 2:
        sd_f = float(np.std(values, ddof=1))
        sem_f = sd_f / math.sqrt(n)
    else:
        sd_f = None
        sem_f = None

    return AggregateResult(
        n=n,
        mean_f=mean_f,
        sd_f=sd_f,
        sem_f=sem_f,
        per_row=rows,
        rounding_mode=modes.pop(),
        lens_kind=lens_kind,
    )
