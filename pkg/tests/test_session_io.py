"""
会话文件读写测试
"""
import pytest

from src.dataset.session_io import (
    load_bundled_session,
    load_golden,
    load_session,
    parse_session,
    serialize_session,
)
from src.errors import InvalidInput, ParseError
from src.models import CameraSpec, LensKind, ObjectSpec, ObservationRow, Session

VALID = """\
camera_model = Test Phone
camera_fc_cm = 0.422
pixel_pitch_um = 1.4
object_width_cm = 2.0
object_distance_cm = -9.1
lens_kind = convex

[observations]
obs_no,D1_cm,pixel1,D_cm,pixel2
1,12.1,425,27.4,222
2,12.1,425,43.7,174
"""


def _edit(line_no, new_text):
    lines = VALID.splitlines()
    if new_text is None:
        del lines[line_no - 1]
    else:
        lines[line_no - 1] = new_text
    return "\n".join(lines) + "\n"


def test_valid_text():
    session = parse_session(VALID)
    assert session.camera.model_label == "Test Phone"
    assert session.camera.focal_length_fc == 0.422
    assert session.object.distance_u == -9.1
    assert session.lens_kind == LensKind.CONVEX
    assert [row.pixel2 for row in session.rows] == [222, 174]


def test_comments_bom_and_spacing():
    text = "\ufeff# header comment\n" + VALID.replace("obs_no,D1_cm", "obs_no, D1_cm") + "# trailing\n"
    assert parse_session(text) == parse_session(VALID)


def test_bundled_tables():
    table1 = load_bundled_session(1)
    table2 = load_bundled_session(2)
    assert table1.lens_kind == LensKind.CONCAVE
    assert table1.camera.pixel_pitch == 1.7
    assert table1.rows[0] == ObservationRow(obs_no=1, D1=3.6, pixel1=1211, D=21.6, pixel2=376)
    assert table2.camera.model_label == "Apple iPhone 12 mini"
    assert len(table2.rows) == 10
    assert table2.rows[-1].D2 == pytest.approx(64.4)


def test_unknown_table():
    with pytest.raises(InvalidInput):
        load_bundled_session(3)


def test_golden_values():
    golden = load_golden(2)
    assert golden["mean_f"] == "17.2"
    assert len(golden["rows"]) == 10


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        (_edit(3, None), 7, "pixel_pitch_um"),
        (_edit(6, "lens_kind = flat"), 6, "lens_kind"),
        (_edit(5, "object_distance_cm = 9.1"), 5, "negative"),
        (_edit(2, "camera_fc_cm = abc"), 2, "camera_fc_cm"),
        (_edit(11, "2,12.1,425,43.7"), 11, "5 comma-separated"),
        (_edit(11, "2,12.1,17x,43.7,174"), 11, "pixel1"),
        (_edit(11, "1,12.1,425,43.7,174"), 11, "duplicate obs_no"),
        (_edit(9, "obs,D1,p1,D,p2"), 9, "header"),
        (_edit(10, "1,12.1,425,27.4,425"), 10, "degenerate"),
        (_edit(10, "1,12.1,425,0,222"), 10, "non-zero"),
        (_edit(10, "1,12.1,425,nan,222"), 10, "D_cm"),
        (_edit(11, "2,1e400,425,43.7,174"), 11, "not a finite number"),
        (_edit(2, "camera_fc_cm = 1e400"), 2, "camera_fc_cm: not a finite number"),
        (_edit(2, "camera_fc_cm = 0.422\ncolour = red"), 3, "unknown key"),
        (_edit(4, "camera_model = Other"), 4, "duplicate key"),
        ("\n".join(VALID.splitlines()[:9]) + "\n", 9, "no observation rows"),
    ],
)
def test_malformed(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse_session(text)
    assert info.value.line == line
    assert fragment in info.value.reason


def test_descending_obs_no():
    text = VALID.replace("1,12.1,425,27.4,222\n2,", "5,12.1,425,27.4,222\n2,")
    with pytest.raises(ParseError) as info:
        parse_session(text)
    assert info.value.line == 11


def test_missing_marker():
    text = "\n".join(VALID.splitlines()[:6]) + "\n"
    with pytest.raises(ParseError) as info:
        parse_session(text)
    assert info.value.line == 6
    assert "[observations]" in info.value.reason


def test_error_names_file(tmp_path):
    path = tmp_path / "bad.session"
    path.write_text(_edit(6, "lens_kind = flat"), encoding="utf-8")
    with pytest.raises(ParseError) as info:
        load_session(path)
    assert info.value.source == str(path)
    assert str(info.value).startswith(f"{path}:6:")


def test_missing_file(tmp_path):
    with pytest.raises(InvalidInput):
        load_session(tmp_path / "absent.session")


def test_bundled_round_trip():
    for table in (1, 2):
        session = load_bundled_session(table)
        assert parse_session(serialize_session(session, comment="copy")) == session


LABEL_CHARS = "abcXYZ0129 -_.,#=:()\u00b5\u2122\u4e2d\u6587"


def _random_label(rng):
    size = int(rng.integers(0, 16))
    return "".join(LABEL_CHARS[int(k)] for k in rng.integers(0, len(LABEL_CHARS), size=size)).strip()


def test_random_round_trip(rng):
    for _ in range(100):
        n = int(rng.integers(1, 12))
        numbers = sorted(set(int(k) for k in rng.integers(1, 1000, size=n)))
        rows = []
        for obs_no in numbers:
            pixel1 = int(rng.integers(1, 5000))
            step = int(rng.integers(1, 500))
            pixel2 = pixel1 - step if pixel1 > step and rng.random() < 0.5 else pixel1 + step
            rows.append(ObservationRow(
                obs_no=obs_no,
                D1=float(rng.uniform(0.0, 100.0)),
                pixel1=pixel1,
                D=float(rng.uniform(0.1, 100.0)) * (1 if rng.random() < 0.8 else -1),
                pixel2=pixel2,
            ))
        session = Session(
            camera=CameraSpec(
                focal_length_fc=float(rng.uniform(0.1, 1.0)),
                pixel_pitch=float(rng.uniform(0.5, 3.0)),
                model_label=_random_label(rng),
            ),
            object=ObjectSpec(width_O=float(rng.uniform(0.5, 10.0)), distance_u=-float(rng.uniform(0.5, 50.0))),
            lens_kind=LensKind.CONVEX if rng.random() < 0.5 else LensKind.CONCAVE,
            rows=rows,
        )
        assert parse_session(serialize_session(session)) == session


def test_unstorable_label():
    session = load_bundled_session(1)
    bad = session.model_copy(update={"camera": session.camera.model_copy(update={"model_label": "a\nb"})})
    with pytest.raises(InvalidInput):
        serialize_session(bad)


@pytest.mark.parametrize("separator", ["\n", "\r", "\u2028", "\u2029", "\x0b", "\x0c", "\x1c", "\x1d", "\x1e", "\x85"])
def test_label_with_line_break_rejected(separator):
    session = load_bundled_session(2)
    camera = session.camera.model_copy(update={"model_label": f"iPhone{separator}Pro"})
    with pytest.raises(InvalidInput):
        serialize_session(session.model_copy(update={"camera": camera}))
