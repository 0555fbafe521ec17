"""
报告输出测试
"""
import pytest

from src.dataset.report import (
    CSV_COLUMNS,
    check_golden,
    emit_report,
    format_summary,
    golden_cell_count,
)
from src.dataset.session_io import load_golden
from src.estimation.pipeline import aggregate, estimate_session
from src.models import RoundingMode

TABLE = RoundingMode.TABLE_REPRODUCTION


def _table_result(session):
    return aggregate(estimate_session(session, TABLE), lens_kind=session.lens_kind)


@pytest.mark.parametrize("table", [1, 2])
def test_text_table_matches_published_cells(table, table1_session, table2_session):
    session = table1_session if table == 1 else table2_session
    lines = emit_report(_table_result(session), "text_table").splitlines()
    data = [line.split() for line in lines[4:14]]
    golden = load_golden(table)
    for cells, (obs_no, I1, I2, I, f) in zip(data, golden["rows"]):
        assert cells[0] == str(obs_no)
        assert [cells[3], cells[6], cells[7], cells[8]] == [I1, I2, I, f]


def test_text_table_header_and_footer(table1_session):
    lines = emit_report(_table_result(table1_session), "text_table").splitlines()
    assert lines[1].split()[-1] == "-f"
    assert lines[-1] == "mean f = -26.9 ± 0.06 cm"
    assert set(lines[0]) == {"-"}


def test_text_table_row_values(table1_session):
    lines = emit_report(_table_result(table1_session), "text_table").splitlines()
    assert lines[4].split() == ["1", "3.6", "1211", "0.2059", "21.6", "376", "0.0639", "3.76", "26.7"]


def test_convex_footer(table2_session):
    result = _table_result(table2_session)
    assert format_summary(result) == "mean f = 17.2 ± 0.04 cm"


def test_single_row_csv(table2_session):
    rows = estimate_session(table2_session, RoundingMode.FULL_PRECISION)[:1]
    text = emit_report(aggregate(rows, allow_single=True), "csv")
    lines = text.splitlines()
    assert len(lines) == 2
    assert lines[0].split(",") == CSV_COLUMNS
    cells = dict(zip(CSV_COLUMNS, lines[1].split(",")))
    assert cells["obs_no"] == "1"
    assert float(cells["f_cm"]) == rows[0].f
    assert cells["rounding_mode"] == "full_precision"


def test_single_row_summary(table2_session):
    rows = estimate_session(table2_session, TABLE)[:1]
    assert format_summary(aggregate(rows, allow_single=True)) == "mean f = 17.3 cm (n = 1, sem undefined)"


def test_plotdata(table2_session):
    result = _table_result(table2_session)
    blocks = emit_report(result, "plotdata").strip().split("\n\n")
    assert len(blocks) == 2
    first = blocks[0].splitlines()
    assert first[0] == "# D_cm f_cm"
    pairs = [tuple(float(x) for x in line.split()) for line in first[1:]]
    assert pairs == [(row.obs.D, row.f) for row in result.per_row]
    assert blocks[1].splitlines()[0] == "# D1_cm I_cm"
    assert len(blocks[1].splitlines()) == 11


def test_unknown_format(table2_session):
    with pytest.raises(ValueError):
        emit_report(_table_result(table2_session), "html")


@pytest.mark.parametrize("table", [1, 2])
def test_golden_check_passes(table, table1_session, table2_session):
    session = table1_session if table == 1 else table2_session
    golden = load_golden(table)
    assert check_golden(_table_result(session), golden) == []
    assert golden_cell_count(golden) == 42


def test_golden_check_reports_mismatch(table1_session):
    golden = load_golden(1)
    tampered = dict(golden, rows=[list(r) for r in golden["rows"]])
    tampered["rows"][2][4] = "27.1"
    mismatches = check_golden(_table_result(table1_session), tampered)
    assert mismatches == ["row 3 f: got 27.0, expected 27.1"]


def test_full_precision_does_not_match_table(table1_session):
    result = aggregate(estimate_session(table1_session), lens_kind=table1_session.lens_kind)
    assert check_golden(result, load_golden(1))
