"""
命令行测试
"""
import io

import pytest

from src.cli import run
from src.dataset.session_io import DATA_DIR
from src.settings import Settings

TABLE1 = str(DATA_DIR / "table1.session")
TABLE2 = str(DATA_DIR / "table2.session")

SIMULATE_TABLE1 = [
    "simulate", "--f=-26.9", "--u=-8.8", "--O=5.0", "--fc=0.532", "--pitch=1.7",
    "--positions=3.6:21.6,4.5:22.4,5.3:8.7,7.2:8.5", "--model=bench phone",
]


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err, settings=Settings())
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("table, footer", [(1, "mean f = -26.9 ± 0.06 cm"), (2, "mean f = 17.2 ± 0.04 cm")])
def test_reproduce(table, footer):
    code, out, err = _run("reproduce", "--table", str(table))
    assert code == 0, err
    lines = out.splitlines()
    assert lines[0] == f"Table {table}"
    assert lines[1].startswith("# Apple iPhone 12")
    assert footer in lines
    assert lines[-1] == "golden check: 42 cells, 0 mismatches"


def test_estimate_table_mode():
    code, out, _ = _run("estimate", TABLE2, "--mode", "table")
    assert code == 0
    assert out.splitlines()[-1] == "mean f = 17.2 ± 0.04 cm"


def test_estimate_csv_has_no_caption():
    code, out, _ = _run("estimate", TABLE1, "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("obs_no,")
    assert len(lines) == 11


def test_simulate_then_estimate(tmp_path):
    code, out, _ = _run(*SIMULATE_TABLE1)
    assert code == 0
    assert out.startswith("# synthetic session")
    path = tmp_path / "synthetic.session"
    path.write_text(out, encoding="utf-8")

    code, out, _ = _run("estimate", str(path), "--format", "csv")
    assert code == 0
    header, *rows = out.splitlines()
    column = header.split(",").index("f_cm")
    estimates = [float(row.split(",")[column]) for row in rows]
    assert len(estimates) == 4
    assert all(abs(f + 26.9) / 26.9 <= 0.02 for f in estimates)


def test_simulate_with_noise_is_reproducible():
    argv = SIMULATE_TABLE1 + ["--noise", "0.5,0.05,0.05", "--seed", "3"]
    first = _run(*argv)
    assert first[0] == 0
    assert first == _run(*argv)
    assert "seed 3" in first[1].splitlines()[0]


def test_simulate_real_image():
    code, _, err = _run(
        "simulate", "--f=17.2", "--u=-30", "--O=2", "--fc=0.422", "--pitch=1.4", "--positions=12.1:27.4",
    )
    assert code == 3
    assert "NotVirtual" in err


def test_simulate_zero_displacement():
    code, _, _ = _run(
        "simulate", "--f=-26.9", "--u=-8.8", "--O=5", "--fc=0.532", "--pitch=1.7", "--positions=3.6:0",
    )
    assert code == 2


def test_uncertainty_deterministic():
    argv = ("uncertainty", TABLE2, "--trials", "200", "--seed", "4")
    code, out, _ = _run(*argv)
    assert code == 0
    assert out == _run(*argv)[1]
    lines = out.splitlines()
    assert lines[0].startswith("# trials=200 seed=4")
    assert lines[1].startswith("obs,trials,failed,mean_f_cm,sd_f_cm")
    assert len(lines) == 13
    assert lines[-1].startswith("pooled,2000,0,")


@pytest.mark.parametrize(
    "argv",
    [
        ("uncertainty", TABLE2, "--trials", "50"),
        ("uncertainty", TABLE2, "--seed", "-1"),
        ("estimate", TABLE2, "--mode", "rough"),
        ("estimate", TABLE2, "--bogus"),
        ("reproduce", "--table", "3"),
        ("simulate", "--f=10"),
        ("simulate", *SIMULATE_TABLE1[1:], "--noise", "1,2"),
        ("frobnicate",),
        (),
    ],
)
def test_usage_errors(argv):
    code, _, err = _run(*argv)
    assert code == 1
    assert "error:" in err


def test_help_goes_to_stdout_stream():
    code, out, _ = _run("--help")
    assert code == 0
    assert out.startswith("usage: lensmeter")
    assert "reproduce" in out


def test_version():
    code, out, _ = _run("--version")
    assert code == 0
    assert out.strip() == "Virtual Lens Meter 1.0.0"


def test_subcommand_help():
    code, out, _ = _run("estimate", "--help")
    assert code == 0
    assert "--mode" in out


def test_missing_file(tmp_path):
    code, _, _ = _run("estimate", str(tmp_path / "absent.session"))
    assert code == 2


def test_parse_error_names_line(tmp_path):
    path = tmp_path / "bad.session"
    path.write_text(open(TABLE2, encoding="utf-8").read().replace("pixel_pitch_um = 1.4", "pixel_pitch_um = -1.4"))
    code, _, err = _run("estimate", str(path))
    assert code == 2
    assert f"{path}:5:" in err


def test_inconsistent_kind(tmp_path):
    path = tmp_path / "mislabelled.session"
    path.write_text(open(TABLE1, encoding="utf-8").read().replace("lens_kind = concave", "lens_kind = convex"))
    code, _, err = _run("estimate", str(path))
    assert code == 3
    assert "InconsistentKind" in err


def test_degenerate_row(tmp_path):
    path = tmp_path / "flat.session"
    path.write_text(open(TABLE2, encoding="utf-8").read().replace("3,64.4,156,29.5,115", "3,64.4,0,29.5,115"))
    code, _, err = _run("estimate", str(path))
    assert code == 3
    assert "ZeroWidth" in err
