"""
报告输出：参考表格式文本、全精度CSV、绘图数据
"""
import csv
import io
import logging
from typing import Any, Dict, List, Optional

from src.models import AggregateResult, EstimateRow, LensKind
from src.utils import format_fixed

logger = logging.getLogger(__name__)

REPORT_FORMATS = ("text_table", "csv", "plotdata")

# 显示精度：与参考表格一致
DISPLAY_PLACES = {"D1": 1, "D": 1, "I1": 4, "I2": 4, "I": 2, "f": 1, "mean_f": 1, "sem_f": 2}

CSV_COLUMNS = [
    "obs_no", "D1_cm", "pixel1", "I1_cm", "D_cm", "pixel2", "I2_cm", "I_cm",
    "m", "f_cm", "v_cm", "v_camera_cm", "f_position_cm", "rounding_mode",
]


def f_column_name(lens_kind: Optional[LensKind]) -> str:
    """凹透镜表格给出 -f 列（正数），凸透镜给出 f 列"""
    return "-f" if lens_kind == LensKind.CONCAVE else "f"


def format_cells(row: EstimateRow, lens_kind: Optional[LensKind] = None) -> Dict[str, str]:
    """一行结果按参考表格的显示精度格式化"""
    f_shown = -row.f if lens_kind == LensKind.CONCAVE else row.f
    cells = {
        "I1": format_fixed(row.I1, DISPLAY_PLACES["I1"]),
        "I2": format_fixed(row.I2, DISPLAY_PLACES["I2"]),
        "I": format_fixed(row.I, DISPLAY_PLACES["I"]),
        "f": format_fixed(f_shown, DISPLAY_PLACES["f"]),
    }
    if row.obs is not None:
        cells.update({
            "obs": str(row.obs.obs_no),
            "D1": format_fixed(row.obs.D1, DISPLAY_PLACES["D1"]),
            "pixel1": str(row.obs.pixel1),
            "D": format_fixed(row.obs.D, DISPLAY_PLACES["D"]),
            "pixel2": str(row.obs.pixel2),
        })
    return cells


def format_summary(result: AggregateResult) -> str:
    """汇总行，例如 'mean f = -26.9 ± 0.06 cm'"""
    mean = format_fixed(result.mean_f, DISPLAY_PLACES["mean_f"])
    if result.sem_f is None:
        return f"mean f = {mean} cm (n = {result.n}, sem undefined)"
    return f"mean f = {mean} ± {format_fixed(result.sem_f, DISPLAY_PLACES['sem_f'])} cm"


def _text_table(result: AggregateResult) -> str:
    keys = ["obs", "D1", "pixel1", "I1", "D", "pixel2", "I2", "I", "f"]
    head1 = ["obs", "D1", "pixel", "I1", "D", "pixel", "I2", "I", f_column_name(result.lens_kind)]
    head2 = ["no.", "cm", "1", "cm", "cm", "2", "cm", "cm", "cm"]
    widths = [4, 7, 7, 8, 7, 7, 8, 7, 7]

    def join(cells: List[str]) -> str:
        return "".join(cell.rjust(width) for cell, width in zip(cells, widths)).rstrip()

    rule = "-" * sum(widths)
    lines = [rule, join(head1), join(head2), rule]
    for row in result.per_row:
        cells = format_cells(row, result.lens_kind)
        lines.append(join([cells.get(key, "") for key in keys]))
    lines.append(rule)
    lines.append(format_summary(result))
    return "\n".join(lines) + "\n"


def _csv(result: AggregateResult) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in result.per_row:
        obs = row.obs
        writer.writerow([
            obs.obs_no if obs else "",
            repr(obs.D1) if obs else "",
            obs.pixel1 if obs else "",
            repr(row.I1),
            repr(obs.D) if obs else "",
            obs.pixel2 if obs else "",
            repr(row.I2),
            repr(row.I),
            repr(row.m),
            repr(row.f),
            repr(row.v),
            repr(row.v_camera),
            repr(row.f_position) if row.f_position is not None else "",
            row.rounding_mode.value,
        ])
    return buffer.getvalue()


def _plotdata(result: AggregateResult) -> str:
    rows = [row for row in result.per_row if row.obs is not None]
    lines = ["# D_cm f_cm"]
    lines += [f"{row.obs.D!r} {row.f!r}" for row in rows]
    lines += ["", "# D1_cm I_cm"]
    lines += [f"{row.obs.D1!r} {row.I!r}" for row in rows]
    return "\n".join(lines) + "\n"


def emit_report(result: AggregateResult, fmt: str = "text_table") -> str:
    """
    输出报告

    Args:
        result: 汇总结果
        fmt: text_table（参考表格） / csv（全精度） / plotdata（(D, f) 与 (D1, I) 两组数据）

    Returns:
        报告文本
    """
    if fmt == "text_table":
        return _text_table(result)
    if fmt == "csv":
        return _csv(result)
    if fmt == "plotdata":
        return _plotdata(result)
    raise ValueError(f"unknown report format {fmt!r}, expected one of {REPORT_FORMATS}")


def check_golden(result: AggregateResult, golden: Dict[str, Any]) -> List[str]:
    """
    与参考表格逐格比较

    Args:
        result: 表格复现模式下的汇总结果
        golden: load_golden 返回的期望值

    Returns:
        不一致项的描述列表，为空表示全部一致
    """
    mismatches = []
    by_obs = {row.obs.obs_no: row for row in result.per_row if row.obs is not None}
    for obs_no, *expected in golden["rows"]:
        row = by_obs.get(obs_no)
        if row is None:
            mismatches.append(f"row {obs_no}: missing")
            continue
        cells = format_cells(row, result.lens_kind)
        for key, want in zip(("I1", "I2", "I", "f"), expected):
            if cells[key] != want:
                mismatches.append(f"row {obs_no} {key}: got {cells[key]}, expected {want}")

    mean = format_fixed(result.mean_f, DISPLAY_PLACES["mean_f"])
    if mean != golden["mean_f"]:
        mismatches.append(f"mean f: got {mean}, expected {golden['mean_f']}")
    sem = format_fixed(result.sem_f, DISPLAY_PLACES["sem_f"]) if result.sem_f is not None else "n/a"
    if sem != golden["sem_f"]:
        mismatches.append(f"sem f: got {sem}, expected {golden['sem_f']}")

    if mismatches:
        logger.warning(f"与参考表格不一致: {len(mismatches)} 处")
    return mismatches


def golden_cell_count(golden: Dict[str, Any]) -> int:
    """参与比较的格子数（每行4格，加上均值和标准误差）"""
    return 4 * len(golden["rows"]) + 2
