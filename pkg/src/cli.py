"""
命令行入口

子命令：reproduce / estimate / simulate / uncertainty
退出码：0 成功，1 用法错误，2 数据/解析错误，3 计算退化
"""
import argparse
import contextlib
import logging
import sys
from typing import List, Optional, Sequence, TextIO, Tuple

from pydantic import ValidationError

from src.dataset.report import (
    check_golden,
    emit_report,
    golden_cell_count,
)
from src.dataset.session_io import (
    load_bundled_session,
    load_golden,
    load_session,
    serialize_session,
)
from src.errors import GoldenMismatch, LensMeterError, NotVirtual, UsageError
from src.estimation.pipeline import aggregate, estimate_session
from src.estimation.uncertainty import propagate_session
from src.models import (
    BenchScene,
    CameraSpec,
    LensKind,
    LensSpec,
    NoiseSpec,
    ObjectSpec,
    RoundingMode,
    Session,
    UncertaintySummary,
)
from src.settings import Settings, get_settings
from src.simulation.bench import synthesize_session
from src.utils import setup_logging

logger = logging.getLogger(__name__)

MODES = {"full": RoundingMode.FULL_PRECISION, "table": RoundingMode.TABLE_REPRODUCTION}
FORMATS = {"text": "text_table", "csv": "csv", "plotdata": "plotdata"}


class _ArgumentParser(argparse.ArgumentParser):
    """出错时抛出UsageError而不是直接退出"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _noise_triplet(text: str) -> Tuple[float, float, float]:
    parts = text.split(",")
    try:
        values = tuple(float(part) for part in parts)
    except ValueError:
        values = ()
    if len(values) != 3 or any(not value >= 0 for value in values):
        raise argparse.ArgumentTypeError(
            f"expected three non-negative numbers 'px,D,u', got {text!r}"
        )
    return values


def _positions(text: str) -> List[Tuple[float, float]]:
    positions = []
    for item in text.split(","):
        try:
            D1, D = (float(part) for part in item.split(":"))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected 'D1:D[,D1:D...]', got {text!r}")
        positions.append((D1, D))
    return positions


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    """构建参数解析器"""
    parser = _ArgumentParser(
        prog="lensmeter",
        description="Thin-lens focal length from smartphone photographs of a virtual image",
        allow_abbrev=False,
    )
    parser.add_argument(
        "--version", action="version", version=f"{settings.app.name} {settings.app.version}",
    )
    parser.add_argument(
        "--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], default=None,
        help="override the configured log level",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    reproduce = subparsers.add_parser(
        "reproduce", help="regenerate a published table and verify every cell",
        allow_abbrev=False,
    )
    reproduce.add_argument("--table", type=int, choices=[1, 2], required=True)

    estimate = subparsers.add_parser(
        "estimate", help="estimate the focal length from a session file", allow_abbrev=False,
    )
    estimate.add_argument("session")
    estimate.add_argument(
        "--mode", choices=sorted(MODES), default=settings.estimation.default_mode,
    )
    estimate.add_argument(
        "--format", choices=sorted(FORMATS), default=settings.report.default_format,
    )

    simulate = subparsers.add_parser(
        "simulate", help="emit a synthetic session file", allow_abbrev=False,
    )
    simulate.add_argument("--f", type=float, required=True, help="lens focal length, cm")
    simulate.add_argument("--u", type=float, required=True, help="object distance (negative), cm")
    simulate.add_argument("--O", type=float, required=True, help="object width, cm")
    simulate.add_argument("--fc", type=float, required=True, help="camera focal length, cm")
    simulate.add_argument("--pitch", type=float, required=True, help="pixel pitch, um")
    simulate.add_argument("--positions", type=_positions, required=True, help="D1:D,...")
    simulate.add_argument("--noise", type=_noise_triplet, default=None, help="px,D,u half-widths")
    simulate.add_argument("--seed", type=int, default=settings.simulation.seed)
    simulate.add_argument("--camera-offset", type=float, default=0.0)
    simulate.add_argument("--model", default="synthetic", help="camera model label")

    uncertainty = subparsers.add_parser(
        "uncertainty", help="Monte Carlo focal-length distributions", allow_abbrev=False,
    )
    uncertainty.add_argument("session")
    uncertainty.add_argument("--trials", type=int, default=settings.uncertainty.trials)
    uncertainty.add_argument("--seed", type=int, default=settings.uncertainty.seed)
    uncertainty.add_argument("--noise", type=_noise_triplet, default=None, help="px,D,u half-widths")

    return parser


def _caption(session: Session) -> str:
    camera = session.camera
    return (
        f"# {camera.model_label}: f_c = {camera.focal_length_fc!r} cm, "
        f"1 pixel = {camera.pixel_pitch!r} um; O = {session.object.width_O!r} cm, "
        f"u = {session.object.distance_u!r} cm, {session.lens_kind.value} lens"
    )


def _cmd_reproduce(args, settings: Settings, out: TextIO, err: TextIO) -> int:
    session = load_bundled_session(args.table)
    rows = estimate_session(
        session, RoundingMode.TABLE_REPRODUCTION,
        min_pixel_contrast=settings.estimation.min_pixel_contrast,
    )
    result = aggregate(rows, lens_kind=session.lens_kind)
    golden = load_golden(args.table)

    print(f"Table {args.table}", file=out)
    print(_caption(session), file=out)
    out.write(emit_report(result, "text_table"))

    mismatches = check_golden(result, golden)
    print(f"golden check: {golden_cell_count(golden)} cells, {len(mismatches)} mismatches", file=out)
    for mismatch in mismatches:
        print(mismatch, file=err)

    logger.info(f"复现表{args.table}: {golden_cell_count(golden)} 格, {len(mismatches)} 处不一致")
    return GoldenMismatch.exit_code if mismatches else 0


def _cmd_estimate(args, settings: Settings, out: TextIO, err: TextIO) -> int:
    session = load_session(args.session)
    rows = estimate_session(
        session, MODES[args.mode],
        kind_check=settings.estimation.kind_check,
        min_pixel_contrast=settings.estimation.min_pixel_contrast,
    )
    result = aggregate(rows, allow_single=True, lens_kind=session.lens_kind)
    fmt = FORMATS[args.format]
    if fmt == "text_table":
        print(_caption(session), file=out)
    out.write(emit_report(result, fmt))
    return 0


def _noise_spec(triplet: Optional[Tuple[float, float, float]], seed: int, settings: Settings) -> NoiseSpec:
    if triplet is None:
        defaults = settings.uncertainty.noise
        triplet = (defaults.pixel_halfwidth, defaults.D_halfwidth, defaults.u_halfwidth)
    return NoiseSpec(
        pixel_halfwidth=triplet[0], D_halfwidth=triplet[1], u_halfwidth=triplet[2], seed=seed,
    )


def _cmd_simulate(args, settings: Settings, out: TextIO, err: TextIO) -> int:
    if args.f > 0 and not abs(args.u) < args.f:
        raise NotVirtual(
            f"convex lens f={args.f} cm with u={args.u} cm forms a real image"
        )
    scene = BenchScene(
        lens=LensSpec(focal_length=args.f, kind=LensKind.from_focal_length(args.f)),
        object=ObjectSpec(width_O=args.O, distance_u=args.u),
        camera=CameraSpec(focal_length_fc=args.fc, pixel_pitch=args.pitch, model_label=args.model),
        positions=args.positions,
        camera_offset=args.camera_offset,
    )
    noise = _noise_spec(args.noise, args.seed, settings) if args.noise is not None else None
    session = synthesize_session(scene, noise=noise, label=args.model)

    comment = f"synthetic session: f = {args.f!r} cm"
    if noise is not None:
        comment += (
            f", noise px={noise.pixel_halfwidth!r} D={noise.D_halfwidth!r} "
            f"u={noise.u_halfwidth!r}, seed {noise.seed}"
        )
    out.write(serialize_session(session, comment=comment))
    return 0


def _summary_line(label: str, summary: UncertaintySummary) -> str:
    cells = [
        label, str(summary.trials), str(summary.failed),
        f"{summary.mean_f:.6f}", f"{summary.sd_f:.6f}",
    ]
    cells += [f"{value:.6f}" for value in summary.quantiles.values()]
    return ",".join(cells)


def _cmd_uncertainty(args, settings: Settings, out: TextIO, err: TextIO) -> int:
    if args.trials < 100:
        raise UsageError(f"--trials must be at least 100, got {args.trials}")
    if args.seed < 0:
        raise UsageError(f"--seed must be non-negative, got {args.seed}")

    session = load_session(args.session)
    noise = _noise_spec(args.noise, args.seed, settings)
    quantiles = settings.uncertainty.quantiles
    per_row, pooled = propagate_session(
        session, noise, trials=args.trials, quantiles=quantiles,
        max_failure_fraction=settings.uncertainty.max_failure_fraction,
    )

    print(
        f"# trials={args.trials} seed={noise.seed} noise px={noise.pixel_halfwidth!r} "
        f"D={noise.D_halfwidth!r} u={noise.u_halfwidth!r}",
        file=out,
    )
    header = ["obs", "trials", "failed", "mean_f_cm", "sd_f_cm"]
    header += [f"q{q!r}_cm" for q in quantiles]
    print(",".join(header), file=out)
    for obs_no, summary in per_row.items():
        print(_summary_line(str(obs_no), summary), file=out)
    print(_summary_line("pooled", pooled), file=out)
    return 0


COMMANDS = {
    "reproduce": _cmd_reproduce,
    "estimate": _cmd_estimate,
    "simulate": _cmd_simulate,
    "uncertainty": _cmd_uncertainty,
}


def run(
    argv: Optional[Sequence[str]] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
    settings: Optional[Settings] = None,
) -> int:
    """
    执行命令行

    Args:
        argv: 参数列表，默认取 sys.argv[1:]
        stdout: 报告输出流
        stderr: 诊断输出流
        settings: 配置，默认读取 config/config.yaml

    Returns:
        退出码
    """
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    settings = settings or get_settings()
    parser = build_parser(settings)

    try:
        with contextlib.redirect_stdout(out):
            args = parser.parse_args(argv)
    except UsageError as e:
        print(parser.format_usage().rstrip(), file=err)
        print(f"error: {e}", file=err)
        return UsageError.exit_code
    except SystemExit as e:
        # --help / --version
        return int(e.code or 0)

    setup_logging(args.log_level or settings.logging.level, settings.logging.log_dir)

    try:
        return COMMANDS[args.command](args, settings, out, err)
    except LensMeterError as e:
        logger.debug(f"{type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=err)
        return e.exit_code
    except ValidationError as e:
        print(f"error: invalid input: {e.errors()[0]['msg']}", file=err)
        return 2


def main():
    """主函数"""
    sys.exit(run())


if __name__ == "__main__":
    main()
