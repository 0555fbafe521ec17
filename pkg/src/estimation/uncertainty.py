"""
蒙特卡洛不确定度传播

像素数、位移D和物距u按均匀分布扰动，对全部样本按全精度流程一次性求f。
随机数由 numpy 的 PCG64 生成器给出，同一种子在各平台上序列一致。
"""
import logging
from typing import Dict, Sequence, Tuple

import numpy as np

from src.errors import InvalidInput
from src.estimation.pipeline import focal_length_array, focal_length_from_widths
from src.models import CameraSpec, NoiseSpec, ObjectSpec, ObservationRow, Session, UncertaintySummary
from src.optics.sensor import UM_PER_CM
from src.utils import make_rng

logger = logging.getLogger(__name__)

MIN_TRIALS = 100
DEFAULT_QUANTILES = (0.025, 0.5, 0.975)


def row_seed(seed: int, obs_no: int) -> int:
    """由会话种子和行号派生每行的种子"""
    return int(np.random.SeedSequence([seed, obs_no]).generate_state(1)[0])


def summarize(
    samples: np.ndarray, trials: int, failed: int,
    quantiles: Sequence[float] = DEFAULT_QUANTILES,
) -> UncertaintySummary:
    """样本统计：均值、n-1 标准差和分位数"""
    if samples.size < 2:
        raise InvalidInput("need at least 2 successful trials")
    values = np.quantile(samples, list(quantiles))
    if np.ptp(samples) == 0:
        # 无噪声：所有样本相同
        mean_f, sd_f = float(samples[0]), 0.0
    else:
        mean_f, sd_f = float(np.mean(samples)), float(np.std(samples, ddof=1))
    return UncertaintySummary(
        trials=trials,
        failed=failed,
        mean_f=mean_f,
        sd_f=sd_f,
        quantiles={float(q): float(x) for q, x in zip(quantiles, values)},
        samples=samples,
    )


def propagate_uncertainty(
    camera: CameraSpec,
    object_spec: ObjectSpec,
    obs: ObservationRow,
    noise: NoiseSpec = NoiseSpec(),
    trials: int = 10000,
    quantiles: Sequence[float] = DEFAULT_QUANTILES,
    max_failure_fraction: float = 0.01,
) -> UncertaintySummary:
    """
    单行的蒙特卡洛不确定度

    Args:
        camera: 相机参数
        object_spec: 物体参数
        obs: 观测行
        noise: 噪声半宽和种子
        trials: 试验次数（>= 100）
        quantiles: 需要报告的分位数
        max_failure_fraction: 允许退化试验所占比例，超出则中止

    Returns:
        UncertaintySummary

    Raises:
        InvalidInput: 试验次数不足
        DegenerateError: 退化试验比例超限时抛出首个错误
    """
    if trials < MIN_TRIALS:
        raise InvalidInput(f"trials must be >= {MIN_TRIALS}, got {trials}")

    rng = make_rng(noise.seed)
    px1 = obs.pixel1 + rng.uniform(-noise.pixel_halfwidth, noise.pixel_halfwidth, trials)
    px2 = obs.pixel2 + rng.uniform(-noise.pixel_halfwidth, noise.pixel_halfwidth, trials)
    D = obs.D + rng.uniform(-noise.D_halfwidth, noise.D_halfwidth, trials)
    u = object_spec.distance_u + rng.uniform(-noise.u_halfwidth, noise.u_halfwidth, trials)

    scale = camera.pixel_pitch / UM_PER_CM
    f_c = camera.focal_length_fc
    O = object_spec.width_O

    samples, ok = focal_length_array(f_c, O, u, px1 * scale, px2 * scale, D)

    failed = int(trials - ok.sum())
    if failed:
        logger.warning(f"第{obs.obs_no}行: {failed}/{trials} 次试验退化，已剔除")
        if failed > max_failure_fraction * trials:
            # 用标量流程重算首个退化试验，抛出对应的错误类型
            k = int(np.argmin(ok))
            focal_length_from_widths(
                f_c, O, float(u[k]), float(px1[k]) * scale, float(px2[k]) * scale, float(D[k])
            )
            raise InvalidInput(f"第{obs.obs_no}行: {failed}/{trials} 次试验退化")

    return summarize(samples[ok], trials, failed, quantiles)


def propagate_session(
    session: Session,
    noise: NoiseSpec = NoiseSpec(),
    trials: int = 10000,
    quantiles: Sequence[float] = DEFAULT_QUANTILES,
    max_failure_fraction: float = 0.01,
) -> Tuple[Dict[int, UncertaintySummary], UncertaintySummary]:
    """
    整个会话的不确定度：逐行结果和全部样本合并后的结果

    Returns:
        (按obs_no索引的逐行结果, 合并结果)
    """
    per_row: Dict[int, UncertaintySummary] = {}
    for obs in session.rows:
        row_noise = noise.model_copy(update={"seed": row_seed(noise.seed, obs.obs_no)})
        per_row[obs.obs_no] = propagate_uncertainty(
            session.camera, session.object, obs, row_noise,
            trials=trials, quantiles=quantiles,
            max_failure_fraction=max_failure_fraction,
        )

    pooled_samples = np.concatenate([s.samples for s in per_row.values()])
    pooled = summarize(
        pooled_samples,
        trials=sum(s.trials for s in per_row.values()),
        failed=sum(s.failed for s in per_row.values()),
        quantiles=quantiles,
    )
    logger.info(f"不确定度传播完成: {len(per_row)} 行, 每行 {trials} 次")
    return per_row, pooled
