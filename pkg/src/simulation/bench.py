"""
光具座正向模型

透镜对物体成虚像，相机（薄透镜）在两个位置对虚像拍照，
传感器像宽按像素尺寸量化为像素数。相机假定对虚像准确对焦。
"""
import logging
from typing import Optional, Tuple

import numpy as np

from src.errors import DegenerateObservation, NotVirtual
from src.estimation.pipeline import estimate_from_widths, estimate_row
from src.models import (
    BenchScene,
    CameraSpec,
    LensKind,
    LensSpec,
    NoiseSpec,
    ObjectSpec,
    ObservationRow,
    RoundingMode,
    Session,
)
from src.optics.core import image_distance, magnification_from_distances
from src.optics.sensor import sensor_image_width, width_to_pixels
from src.utils import make_rng, round_half_up

logger = logging.getLogger(__name__)


def virtual_image(lens: LensSpec, object_spec: ObjectSpec) -> Tuple[float, float]:
    """
    透镜所成的虚像

    Args:
        lens: 待测透镜
        object_spec: 物体

    Returns:
        (像距v, 像宽I)

    Raises:
        NotVirtual: 成实像（凸透镜且物体在焦距以外）
    """
    u = object_spec.distance_u
    v = image_distance(u, lens.focal_length)
    m = magnification_from_distances(u, v)
    if v >= 0 or m <= 0:
        raise NotVirtual(
            f"f={lens.focal_length} cm, u={u} cm forms a real image at v={v:.4f} cm"
        )
    return v, abs(m) * object_spec.width_O


def sensor_widths(scene: BenchScene, position_index: int) -> Tuple[float, float]:
    """两个相机位置上未量化的传感器像宽 (s1, s2)"""
    v, I = virtual_image(scene.lens, scene.object)
    D1, D = scene.positions[position_index]
    fc = scene.camera.focal_length_fc
    d1 = D1 + scene.camera_offset + abs(v)
    d2 = D1 + D + scene.camera_offset + abs(v)
    return sensor_image_width(I, d1, fc), sensor_image_width(I, d2, fc)


def _perturb_count(count: int, halfwidth: float, rng: np.random.Generator) -> int:
    if halfwidth == 0:
        return count
    return max(0, int(round_half_up(count + rng.uniform(-halfwidth, halfwidth), 0)))


def synthesize_observation(
    scene: BenchScene,
    position_index: int,
    noise: Optional[NoiseSpec] = None,
    rng: Optional[np.random.Generator] = None,
    obs_no: Optional[int] = None,
) -> ObservationRow:
    """
    合成一行观测

    Args:
        scene: 场景
        position_index: 相机位置序号
        noise: 噪声，为空时无噪声
        rng: 随机数生成器，为空时按noise.seed新建
        obs_no: 行号，默认 position_index + 1

    Returns:
        ObservationRow
    """
    s1, s2 = sensor_widths(scene, position_index)
    pitch = scene.camera.pixel_pitch
    pixel1 = width_to_pixels(s1, pitch)
    pixel2 = width_to_pixels(s2, pitch)
    D1, D = scene.positions[position_index]

    if noise is not None:
        if rng is None:
            rng = make_rng(noise.seed)
        pixel1 = _perturb_count(pixel1, noise.pixel_halfwidth, rng)
        pixel2 = _perturb_count(pixel2, noise.pixel_halfwidth, rng)
        if noise.D_halfwidth:
            D = D + float(rng.uniform(-noise.D_halfwidth, noise.D_halfwidth))
        if D == 0:
            raise DegenerateObservation("perturbed displacement is zero")

    return ObservationRow(
        obs_no=obs_no if obs_no is not None else position_index + 1,
        D1=D1,
        pixel1=pixel1,
        D=D,
        pixel2=pixel2,
    )


def synthesize_session(
    scene: BenchScene,
    noise: Optional[NoiseSpec] = None,
    label: str = "synthetic",
) -> Session:
    """
    把场景的全部相机位置合成为会话，u的噪声作用在记录的物距上
    """
    rng = make_rng(noise.seed) if noise is not None else None
    u = scene.object.distance_u
    if noise is not None and noise.u_halfwidth:
        u = min(u + float(rng.uniform(-noise.u_halfwidth, noise.u_halfwidth)), -1e-9)

    rows = [
        synthesize_observation(scene, k, noise=noise, rng=rng)
        for k in range(len(scene.positions))
    ]
    logger.info(f"合成会话: {len(rows)} 行, f={scene.lens.focal_length} cm")
    return Session(
        camera=scene.camera.model_copy(update={"model_label": label}),
        object=ObjectSpec(width_O=scene.object.width_O, distance_u=u),
        lens_kind=scene.lens.kind,
        rows=rows,
    )


def round_trip(scene: BenchScene, position_index: int, quantize: bool = True) -> Tuple[float, float]:
    """
    仿真后再估计，返回 (f_true, f_estimated)

    quantize为False时直接使用未量化的传感器像宽。
    """
    f_true = scene.lens.focal_length
    if quantize:
        obs = synthesize_observation(scene, position_index)
        estimate = estimate_row(
            scene.camera, scene.object, obs, RoundingMode.FULL_PRECISION
        )
    else:
        s1, s2 = sensor_widths(scene, position_index)
        D1, D = scene.positions[position_index]
        estimate = estimate_from_widths(
            scene.camera, scene.object, s1, s2, D, D1, RoundingMode.FULL_PRECISION
        )
    return f_true, estimate.f


def random_scene(
    rng: np.random.Generator,
    min_pixels: int = 100,
    max_attempts: int = 10000,
) -> BenchScene:
    """
    随机生成一个可测的虚像场景（单个相机位置）

    |f| in [5, 60]，|u| = a·|f|，a in [0.3, 0.7]，O in [2, 5]，
    f_c in [0.4, 0.6]，像素 [1, 2] µm，D1 in [2, 100]，D in [5, 120]。
    量化后像素数低于 min_pixels 的场景被舍弃。
    """
    for _ in range(max_attempts):
        magnitude = rng.uniform(5.0, 60.0)
        kind = LensKind.CONVEX if rng.random() < 0.5 else LensKind.CONCAVE
        f = magnitude if kind == LensKind.CONVEX else -magnitude
        u = -rng.uniform(0.3, 0.7) * magnitude
        scene = BenchScene(
            lens=LensSpec(focal_length=f, kind=kind),
            object=ObjectSpec(width_O=rng.uniform(2.0, 5.0), distance_u=u),
            camera=CameraSpec(
                focal_length_fc=rng.uniform(0.4, 0.6),
                pixel_pitch=rng.uniform(1.0, 2.0),
                model_label="random",
            ),
            positions=((rng.uniform(2.0, 100.0), rng.uniform(5.0, 120.0)),),
        )
        s1, s2 = sensor_widths(scene, 0)
        pixel1 = width_to_pixels(s1, scene.camera.pixel_pitch)
        pixel2 = width_to_pixels(s2, scene.camera.pixel_pitch)
        if min(pixel1, pixel2) >= min_pixels and pixel1 != pixel2:
            return scene
    raise RuntimeError(f"no measurable scene found in {max_attempts} attempts")
