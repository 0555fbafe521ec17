"""
薄透镜代数

符号约定：实物体物距为负；凸透镜 f > 0，凹透镜 f < 0；虚像像距为负。
透镜公式 1/v - 1/u = 1/f，放大率 m = v/u = I/O。
"""
import math

from src.errors import (
    DegenerateGeometry,
    DegenerateMagnification,
    DegenerateObservation,
    InvalidInput,
)

# 带符号的距离（cm）、放大率、正的横向宽度（cm）
SignedDistance = float
Magnification = float
TransverseWidth = float


def _finite(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise InvalidInput(f"{name} must be finite, got {value!r}")
    return value


def _positive(name: str, value: float) -> float:
    if not _finite(name, value) > 0:
        raise InvalidInput(f"{name} must be positive, got {value!r}")
    return value


def image_distance(u: SignedDistance, f: SignedDistance) -> SignedDistance:
    """
    由物距和焦距求像距 v = u·f/(u + f)

    Args:
        u: 物距
        f: 焦距

    Returns:
        像距

    Raises:
        DegenerateGeometry: u + f = 0，像在无穷远
    """
    _finite("u", u)
    _finite("f", f)
    if u == 0:
        raise DegenerateGeometry("object distance u must be non-zero")
    if f == 0:
        raise DegenerateGeometry("focal length f must be non-zero")
    if u + f == 0:
        raise DegenerateGeometry(f"u + f = 0 (u={u}, f={f}): image at infinity")
    return u * f / (u + f)


def magnification_from_distances(u: SignedDistance, v: SignedDistance) -> Magnification:
    """放大率 m = v/u"""
    _finite("u", u)
    _finite("v", v)
    if u == 0:
        raise DegenerateGeometry("object distance u must be non-zero")
    return v / u


def magnification_from_object_and_focal(u: SignedDistance, f: SignedDistance) -> Magnification:
    """
    放大率 m = 1/(1 + u/f)

    Args:
        u: 物距
        f: 焦距

    Returns:
        放大率

    Raises:
        DegenerateGeometry: f = 0 或 u + f = 0
    """
    _finite("u", u)
    _finite("f", f)
    if f == 0:
        raise DegenerateGeometry("focal length f must be non-zero")
    if u + f == 0:
        raise DegenerateGeometry(f"u + f = 0 (u={u}, f={f}): image at infinity")
    return 1.0 / (1.0 + u / f)


def focal_from_magnification(u: SignedDistance, m: Magnification) -> SignedDistance:
    """
    由放大率反求焦距 f = u/(1/m - 1)

    Args:
        u: 物距
        m: 放大率

    Returns:
        焦距

    Raises:
        DegenerateMagnification: m = 0 或 m = 1
    """
    _finite("u", u)
    _finite("m", m)
    if u == 0:
        raise DegenerateGeometry("object distance u must be non-zero")
    if m == 0:
        raise DegenerateMagnification("magnification is zero")
    denominator = 1.0 / m - 1.0
    if denominator == 0:
        raise DegenerateMagnification("magnification is 1: focal length unbounded")
    return u / denominator


def focal_from_distances(u: SignedDistance, v: SignedDistance) -> SignedDistance:
    """透镜公式求焦距 f = 1/(1/v - 1/u)"""
    _finite("u", u)
    _finite("v", v)
    if u == 0 or v == 0:
        raise DegenerateGeometry("u and v must be non-zero")
    if u == v:
        raise DegenerateGeometry("u = v: focal length unbounded")
    return u * v / (u - v)


def displacement_from_magnifications(
    f_c: float, m1: Magnification, m2: Magnification
) -> SignedDistance:
    """
    相机两位置之间的位移 D = f_c(1/m2 - 1/m1)

    m1, m2 为相机对虚像的放大率 I_i/I。
    """
    _positive("f_c", f_c)
    _finite("m1", m1)
    _finite("m2", m2)
    if m1 == 0 or m2 == 0:
        raise DegenerateMagnification("camera magnifications must be non-zero")
    return f_c * (1.0 / m2 - 1.0 / m1)


def width_two_position(
    D: float, f_c: float, I1: TransverseWidth, I2: TransverseWidth
) -> TransverseWidth:
    """
    两位置法求虚像宽度 I = |D| / (f_c·|1/I2 - 1/I1|)

    Args:
        D: 相机位移
        f_c: 相机镜头焦距
        I1: 第一位置传感器像宽
        I2: 第二位置传感器像宽

    Returns:
        虚像宽度

    Raises:
        DegenerateObservation: I1 = I2 或 D = 0
    """
    _finite("D", D)
    _positive("f_c", f_c)
    _positive("I1", I1)
    _positive("I2", I2)
    if D == 0:
        raise DegenerateObservation("displacement D is zero")
    if I1 == I2:
        raise DegenerateObservation("I1 = I2: the two positions carry no depth information")
    return abs(D) / (f_c * abs(1.0 / I2 - 1.0 / I1))


def camera_object_distance(f_c: float, m_cam: Magnification) -> float:
    """相机镜头到被拍物（这里是虚像）的距离 f_c(1/|m| + 1)"""
    _positive("f_c", f_c)
    _finite("m_cam", m_cam)
    if m_cam == 0:
        raise DegenerateMagnification("camera magnification is zero")
    return f_c * (1.0 / abs(m_cam) + 1.0)
