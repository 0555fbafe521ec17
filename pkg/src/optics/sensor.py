"""
传感器模型：像素数与传感器上物理宽度的换算，相机视为薄透镜
"""
from src.errors import DegenerateGeometry, InvalidInput, ZeroWidth
from src.optics.core import TransverseWidth, _finite, _positive
from src.utils import round_half_up

UM_PER_CM = 1.0e4

PixelCount = int


def pixels_to_width(count: PixelCount, pitch: float) -> TransverseWidth:
    """
    像素数乘以像素尺寸得到传感器上的像宽

    Args:
        count: 像素数
        pitch: 像素尺寸 µm

    Returns:
        像宽 cm

    Raises:
        ZeroWidth: 像素数为0
    """
    _positive("pitch", pitch)
    if count < 0:
        raise InvalidInput(f"pixel count must be non-negative, got {count}")
    if count == 0:
        raise ZeroWidth("zero pixel count carries no width information")
    return count * pitch / UM_PER_CM


def width_to_pixels(width: TransverseWidth, pitch: float) -> PixelCount:
    """像宽换算为像素数，0.5远离零取整"""
    _positive("width", width)
    _positive("pitch", pitch)
    return int(round_half_up(width * UM_PER_CM / pitch, 0))


def sensor_image_width(I: TransverseWidth, d: float, f_c: float) -> TransverseWidth:
    """
    相机在传感器上形成的实像宽度 I·f_c/(d - f_c)

    Args:
        I: 被拍物（虚像）宽度
        d: 相机镜头到被拍物的距离
        f_c: 相机镜头焦距

    Returns:
        传感器像宽 cm

    Raises:
        DegenerateGeometry: d <= f_c，无法成实像
    """
    _positive("I", I)
    _finite("d", d)
    _positive("f_c", f_c)
    if d <= f_c:
        raise DegenerateGeometry(f"camera distance {d} cm is within the focal length {f_c} cm")
    return I * f_c / (d - f_c)
