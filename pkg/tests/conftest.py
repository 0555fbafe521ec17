"""
测试公共fixture
"""
import numpy as np
import pytest

from src.dataset.session_io import load_bundled_session
from src.models import BenchScene, CameraSpec, LensSpec, ObjectSpec
from src.settings import Settings

# 参考表格中的相机位置 (D1, D)
TABLE1_POSITIONS = (
    (3.6, 21.6), (4.5, 22.4), (5.3, 8.7), (7.2, 8.5), (5.9, 21.0),
    (6.3, 16.7), (8.1, 9.6), (11.3, 14.6), (9.7, 11.3), (8.1, 14.9),
)
TABLE2_POSITIONS = (
    (12.1, 27.4), (12.1, 43.7), (64.4, 29.5), (93.9, 31.0), (12.1, 52.3),
    (12.1, 112.8), (64.4, 60.5), (55.8, 69.1), (55.8, 38.1), (55.8, 8.6),
)


@pytest.fixture
def table1_session():
    return load_bundled_session(1)


@pytest.fixture
def table2_session():
    return load_bundled_session(2)


@pytest.fixture
def table1_scene():
    return BenchScene(
        lens=LensSpec(focal_length=-26.9, kind="concave"),
        object=ObjectSpec(width_O=5.0, distance_u=-8.8),
        camera=CameraSpec(focal_length_fc=0.532, pixel_pitch=1.7, model_label="Apple iPhone 12 Pro Max"),
        positions=TABLE1_POSITIONS,
    )


@pytest.fixture
def table2_scene():
    return BenchScene(
        lens=LensSpec(focal_length=17.2, kind="convex"),
        object=ObjectSpec(width_O=2.0, distance_u=-9.1),
        camera=CameraSpec(focal_length_fc=0.422, pixel_pitch=1.4, model_label="Apple iPhone 12 mini"),
        positions=TABLE2_POSITIONS,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def settings():
    return Settings()
