"""
领域模型定义

长度单位一律为cm，像素尺寸为µm。符号约定：实物体的物距为负，
凸透镜焦距为正，凹透镜焦距为负，虚像像距为负（与物体同侧）。
"""
import enum
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class LensKind(str, enum.Enum):
    """透镜类型"""
    CONVEX = "convex"  # 凸透镜，f > 0
    CONCAVE = "concave"  # 凹透镜，f < 0

    @classmethod
    def from_focal_length(cls, focal_length: float) -> "LensKind":
        return cls.CONVEX if focal_length > 0 else cls.CONCAVE


class RoundingMode(str, enum.Enum):
    """计算精度模式"""
    FULL_PRECISION = "full_precision"  # 全精度
    TABLE_REPRODUCTION = "table_reproduction"  # 按参考表格的显示精度逐步取整


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)


class LensSpec(_Frozen):
    """待测透镜"""

    focal_length: float  # cm，带符号
    kind: LensKind

    @model_validator(mode="after")
    def _check_sign(self) -> "LensSpec":
        if self.focal_length == 0:
            raise ValueError("focal_length must be non-zero")
        if LensKind.from_focal_length(self.focal_length) != self.kind:
            raise ValueError(
                f"{self.kind.value} lens requires "
                f"{'positive' if self.kind == LensKind.CONVEX else 'negative'} focal_length"
            )
        return self

    @classmethod
    def from_focal_length(cls, focal_length: float) -> "LensSpec":
        return cls(focal_length=focal_length, kind=LensKind.from_focal_length(focal_length))


class CameraSpec(_Frozen):
    """手机相机：镜头焦距和像素尺寸"""

    focal_length_fc: float = Field(gt=0)  # cm
    pixel_pitch: float = Field(gt=0)  # µm
    model_label: str = ""


class ObjectSpec(_Frozen):
    """物体：宽度O和物距u"""

    width_O: float = Field(gt=0)  # cm
    distance_u: float = Field(lt=0)  # cm，实物体为负


class ObservationRow(_Frozen):
    """一行观测数据（对应参考表格中的一行）"""

    obs_no: int = Field(ge=1)
    D1: float = Field(ge=0)  # 相机到透镜的距离
    pixel1: int = Field(ge=0)
    D: float  # 相机位移，D2 = D1 + D
    pixel2: int = Field(ge=0)

    @field_validator("D")
    @classmethod
    def _nonzero_displacement(cls, value: float) -> float:
        if value == 0:
            raise ValueError("displacement D must be non-zero")
        return value

    @property
    def D2(self) -> float:
        return self.D1 + self.D


class Session(_Frozen):
    """一次测量：相机、物体、透镜类型和全部观测行"""

    camera: CameraSpec
    object: ObjectSpec
    lens_kind: LensKind
    rows: Tuple[ObservationRow, ...] = Field(min_length=1)

    @field_validator("rows")
    @classmethod
    def _ascending_obs_no(cls, rows: Tuple[ObservationRow, ...]) -> Tuple[ObservationRow, ...]:
        numbers = [row.obs_no for row in rows]
        if any(b <= a for a, b in zip(numbers, numbers[1:])):
            raise ValueError("obs_no must be unique and ascending")
        return rows


class EstimateRow(_Frozen):
    """单行估计结果"""

    obs: Optional[ObservationRow] = None  # 直接由像宽估计时为空
    I1: float  # 第一位置传感器像宽 cm
    I2: float  # 第二位置传感器像宽 cm
    I: float = Field(gt=0)  # 虚像宽度 cm
    m: float  # 透镜放大率
    f: float  # 焦距 cm
    v: float  # 虚像像距 m·u
    v_camera: float  # 由相机位置定出的虚像位置
    f_position: Optional[float] = None  # 由v_camera按透镜公式求得的焦距
    rounding_mode: RoundingMode


class AggregateResult(_Frozen):
    """多行汇总"""

    n: int
    mean_f: float
    sd_f: Optional[float] = None
    sem_f: Optional[float] = Field(default=None, ge=0)
    per_row: Tuple[EstimateRow, ...]
    rounding_mode: RoundingMode
    lens_kind: Optional[LensKind] = None


class NoiseSpec(_Frozen):
    """均匀噪声的半宽和随机种子"""

    pixel_halfwidth: float = Field(default=0.5, ge=0)  # px
    D_halfwidth: float = Field(default=0.05, ge=0)  # cm
    u_halfwidth: float = Field(default=0.05, ge=0)  # cm
    seed: int = Field(default=0, ge=0)

    @classmethod
    def zero(cls, seed: int = 0) -> "NoiseSpec":
        return cls(pixel_halfwidth=0.0, D_halfwidth=0.0, u_halfwidth=0.0, seed=seed)


class BenchScene(_Frozen):
    """光具座场景：透镜、物体、相机和若干相机位置 (D1, D)"""

    lens: LensSpec
    object: ObjectSpec
    camera: CameraSpec
    positions: Tuple[Tuple[float, float], ...] = Field(min_length=1)
    camera_offset: float = 0.0  # 相机主面相对机身的偏移 cm

    @model_validator(mode="after")
    def _check_scene(self) -> "BenchScene":
        f = self.lens.focal_length
        u = self.object.distance_u
        if self.lens.kind == LensKind.CONVEX and not abs(u) < f:
            raise ValueError("convex lens needs the object within the focal distance")
        v_abs = abs(u * f / (u + f))
        fc = self.camera.focal_length_fc
        for D1, D in self.positions:
            if D == 0:
                raise ValueError("displacement D must be non-zero")
            if D1 < 0 or D1 + D < 0:
                raise ValueError("camera positions must lie in front of the lens")
            if D1 + self.camera_offset + v_abs <= fc or D1 + D + self.camera_offset + v_abs <= fc:
                raise ValueError("camera cannot focus on the virtual image from this position")
        return self


class UncertaintySummary(_Frozen):
    """蒙特卡洛结果的统计"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    trials: int
    failed: int
    mean_f: float
    sd_f: float
    quantiles: Dict[float, float]
    samples: np.ndarray = Field(repr=False, exclude=True)
