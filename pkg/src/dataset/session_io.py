"""
会话文件读写

格式：`key = value` 行组成的头部，`[observations]` 之后是CSV数据，
表头固定为 obs_no,D1_cm,pixel1,D_cm,pixel2。`#` 开头为注释。
"""
import logging
import math
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml
from pydantic import ValidationError

from src.errors import InvalidInput, ParseError
from src.models import CameraSpec, LensKind, ObjectSpec, ObservationRow, Session

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"

SECTION_MARKER = "[observations]"
OBSERVATION_HEADER = "obs_no,D1_cm,pixel1,D_cm,pixel2"
REQUIRED_KEYS = (
    "camera_model",
    "camera_fc_cm",
    "pixel_pitch_um",
    "object_width_cm",
    "object_distance_cm",
    "lens_kind",
)

_FLOAT_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_INT_RE = re.compile(r"[+-]?\d+")


def _parse_float(text: str, what: str, line: int) -> float:
    if not _FLOAT_RE.fullmatch(text):
        raise ParseError(f"{what}: not a decimal number: {text!r}", line)
    value = float(text)
    if not math.isfinite(value):
        raise ParseError(f"{what}: not a finite number: {text!r}", line)
    return value


def _parse_int(text: str, what: str, line: int) -> int:
    if not _INT_RE.fullmatch(text):
        raise ParseError(f"{what}: not an integer: {text!r}", line)
    return int(text)


def _header_value(key: str, text: str, line: int) -> Any:
    """解析并校验一个头部字段"""
    if key == "camera_model":
        return text
    if key == "lens_kind":
        try:
            return LensKind(text)
        except ValueError:
            raise ParseError(f"lens_kind must be 'convex' or 'concave', got {text!r}", line)

    value = _parse_float(text, key, line)
    if key == "object_distance_cm":
        if not value < 0:
            raise ParseError(f"object_distance_cm must be negative, got {text}", line)
    elif not value > 0:
        raise ParseError(f"{key} must be positive, got {text}", line)
    return value


def _parse_row(text: str, line: int) -> ObservationRow:
    fields = [field.strip() for field in text.split(",")]
    if len(fields) != 5:
        raise ParseError(f"expected 5 comma-separated fields, got {len(fields)}", line)

    obs_no = _parse_int(fields[0], "obs_no", line)
    D1 = _parse_float(fields[1], "D1_cm", line)
    pixel1 = _parse_int(fields[2], "pixel1", line)
    D = _parse_float(fields[3], "D_cm", line)
    pixel2 = _parse_int(fields[4], "pixel2", line)

    if obs_no < 1:
        raise ParseError(f"obs_no must be positive, got {obs_no}", line)
    if D1 < 0:
        raise ParseError(f"D1_cm must be non-negative, got {fields[1]}", line)
    if pixel1 < 0 or pixel2 < 0:
        raise ParseError("pixel counts must be non-negative", line)
    if D == 0:
        raise ParseError("D_cm must be non-zero", line)
    if pixel1 == pixel2:
        raise ParseError(f"pixel1 = pixel2 = {pixel1}: degenerate observation", line)

    return ObservationRow(obs_no=obs_no, D1=D1, pixel1=pixel1, D=D, pixel2=pixel2)


def parse_session(text: str, source: Optional[str] = None) -> Session:
    """
    解析会话文件文本

    Args:
        text: 文件内容
        source: 文件名，仅用于错误信息

    Returns:
        校验后的Session

    Raises:
        ParseError: 缺少字段、数值非法、行号重复等，带行号
    """
    lines = text.lstrip("\ufeff").splitlines()
    last_line = max(len(lines), 1)

    header: Dict[str, Any] = {}
    header_lines: Dict[str, int] = {}
    marker_line: Optional[int] = None
    columns_seen = False
    rows: List[ObservationRow] = []

    try:
        for number, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue

            if marker_line is None:
                if line == SECTION_MARKER:
                    marker_line = number
                    continue
                if "=" not in line:
                    raise ParseError(f"expected 'key = value', got {line!r}", number)
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in REQUIRED_KEYS:
                    raise ParseError(f"unknown key {key!r}", number)
                if key in header:
                    raise ParseError(
                        f"duplicate key {key!r} (first on line {header_lines[key]})", number
                    )
                header[key] = _header_value(key, value, number)
                header_lines[key] = number
                continue

            if not columns_seen:
                if line.replace(" ", "") != OBSERVATION_HEADER:
                    raise ParseError(f"expected header {OBSERVATION_HEADER!r}", number)
                columns_seen = True
                continue

            row = _parse_row(line, number)
            if any(r.obs_no == row.obs_no for r in rows):
                raise ParseError(f"duplicate obs_no {row.obs_no}", number)
            if rows and row.obs_no < rows[-1].obs_no:
                raise ParseError(f"obs_no {row.obs_no} is not ascending", number)
            rows.append(row)

        if marker_line is None:
            missing = [key for key in REQUIRED_KEYS if key not in header]
            if missing:
                raise ParseError(f"missing required key {missing[0]!r}", last_line)
            raise ParseError(f"missing {SECTION_MARKER} section", last_line)

        for key in REQUIRED_KEYS:
            if key not in header:
                raise ParseError(f"missing required key {key!r}", marker_line)
        if not rows:
            raise ParseError("no observation rows", last_line)

        try:
            session = Session(
                camera=CameraSpec(
                    focal_length_fc=header["camera_fc_cm"],
                    pixel_pitch=header["pixel_pitch_um"],
                    model_label=header["camera_model"],
                ),
                object=ObjectSpec(
                    width_O=header["object_width_cm"],
                    distance_u=header["object_distance_cm"],
                ),
                lens_kind=header["lens_kind"],
                rows=rows,
            )
        except ValidationError as e:
            raise ParseError(f"invalid session: {e.errors()[0]['msg']}", marker_line)

    except ParseError as e:
        if source and not e.source:
            raise ParseError(e.reason, e.line, source) from None
        raise

    logger.info(f"解析会话: {len(rows)} 行 ({source or 'text'})")
    return session


def _number(value: float) -> str:
    return repr(float(value))


def serialize_session(session: Session, comment: Optional[str] = None) -> str:
    """
    会话序列化为文本，parse_session 的逆操作

    Args:
        session: 会话
        comment: 文件开头的注释

    Returns:
        文件文本
    """
    label = session.camera.model_label
    if len(label.splitlines()) > 1 or label != label.strip():
        raise InvalidInput(f"camera model label cannot be stored: {label!r}")

    lines = []
    if comment:
        lines.extend(f"# {text}" for text in comment.splitlines())
    lines += [
        f"camera_model = {label}",
        f"camera_fc_cm = {_number(session.camera.focal_length_fc)}",
        f"pixel_pitch_um = {_number(session.camera.pixel_pitch)}",
        f"object_width_cm = {_number(session.object.width_O)}",
        f"object_distance_cm = {_number(session.object.distance_u)}",
        f"lens_kind = {session.lens_kind.value}",
        "",
        SECTION_MARKER,
        OBSERVATION_HEADER,
    ]
    for row in session.rows:
        lines.append(
            f"{row.obs_no},{_number(row.D1)},{row.pixel1},{_number(row.D)},{row.pixel2}"
        )
    return "\n".join(lines) + "\n"


def load_session(path: Union[str, Path]) -> Session:
    """读取会话文件"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidInput(f"cannot read session file {path}: {e}")
    except UnicodeDecodeError:
        raise ParseError("file is not valid UTF-8", 1, str(path))
    return parse_session(text, source=str(path))


def load_bundled_session(table: int) -> Session:
    """内置数据集：1 为凹透镜表，2 为凸透镜表"""
    path = DATA_DIR / f"table{table}.session"
    if not path.exists():
        raise InvalidInput(f"no bundled dataset for table {table}")
    return load_session(path)


def load_golden(table: int) -> Dict[str, Any]:
    """参考表格中公布的显示值"""
    with open(DATA_DIR / "golden.yaml", "r", encoding="utf-8") as f:
        golden = yaml.safe_load(f)
    key = f"table{table}"
    if key not in golden:
        raise InvalidInput(f"no golden values for table {table}")
    return golden[key]
