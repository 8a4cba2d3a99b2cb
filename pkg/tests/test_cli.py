import io
import json
import os
from contextlib import redirect_stdout, redirect_stderr

import pytest

from polycensus.cli import CSV_HEADER, run


def capture(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(argv)
    return code, out.getvalue(), err.getvalue()


def test_decompose_family_example():
    code, out, _ = capture(["decompose", "5,2,3,2,1"])
    assert code == 0
    assert out == "g = 5,2,1 ; h = 0,1,1\n"


def test_decompose_indecomposable():
    code, out, _ = capture(["decompose", "1,1,0,0,1"])
    assert code == 0 and out == "indecomposable\n"


def test_decompose_chain():
    code, out, _ = capture(["decompose", "0,0,0,0,0,0,0,0,1"])
    assert code == 0
    assert out == "f1 = 0,0,1 ; f2 = 0,0,1 ; f3 = 0,0,1\n"


def test_decompose_with_split():
    code, out, _ = capture(["decompose", "5,2,3,2,1", "--split", "2,2"])
    assert code == 0 and out.startswith("g = 5,2,1")
    code, out, _ = capture(["decompose", "0,1,0,0,1", "--split", "2,2"])
    assert code == 0 and out == "indecomposable\n"


def test_decompose_negative_lead_coefficient():
    code, out, _ = capture(["decompose", "-1,0,2,0,-1"])
    assert code == 0


def test_count_prime_degree_row():
    code, out, _ = capture(
        ["count", "--degree", "5", "--monic", "--height-max", "100", "--variant", "total"]
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1] == "5,true,total,,,100,0,forward,1,"


def test_count_both_methods_agree():
    code, out, _ = capture(
        ["count", "--degree", "4", "--monic", "--height-max", "2", "--method", "both"]
    )
    assert code == 0
    rows = out.strip().splitlines()[1:]
    assert len(rows) == 2
    assert rows[0].split(",")[6] == rows[1].split(",")[6] == "65"
    assert {r.split(",")[7] for r in rows} == {"forward", "oracle"}


def test_count_split_and_ipair_columns():
    code, out, _ = capture(
        ["count", "--degree", "6", "--monic", "--height-max", "3", "--variant", "split:3,2"]
    )
    assert code == 0
    row = out.strip().splitlines()[1].split(",")
    assert (row[3], row[4]) == ("3", "2")
    code, out, _ = capture(
        ["count", "--degree", "6", "--monic", "--height-max", "3", "--variant", "indecomp-pair"]
    )
    row = out.strip().splitlines()[1].split(",")
    assert (row[2], row[3], row[4]) == ("indecomp_pair", "3", "2")


def test_count_json_rows():
    code, out, _ = capture(
        ["count", "--degree", "4", "--monic", "--grid", "2,3", "--out", "json"]
    )
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert rows[0]["count"] == "65"
    assert rows[0]["elapsed_seconds"] == ""
    assert [r["H"] for r in rows] == [2, 3]


def test_count_geometric_grid():
    code, out, _ = capture(
        ["count", "--degree", "4", "--monic", "--height-max", "16", "--grid", "geometric:3"]
    )
    assert code == 0
    hs = [int(line.split(",")[5]) for line in out.strip().splitlines()[1:]]
    assert hs == [4, 8, 16]


def test_count_byte_identical_bodies():
    argv = ["count", "--degree", "4", "--monic", "--grid", "5,25,50"]
    _, body1, _ = capture(argv)
    _, body2, _ = capture(argv)
    assert body1 == body2


def test_count_timings_flag():
    code, out, _ = capture(
        ["count", "--degree", "4", "--monic", "--height-max", "2", "--timings"]
    )
    field = out.strip().splitlines()[1].split(",")[9]
    assert field != "" and float(field) >= 0


def test_count_output_file_and_manifest(tmp_path):
    target = tmp_path / "rows.csv"
    code, out, _ = capture(
        ["count", "--degree", "4", "--monic", "--height-max", "3", "--output", str(target)]
    )
    assert code == 0 and out == ""
    body = target.read_text().strip().splitlines()
    assert body[0] == CSV_HEADER and body[1].split(",")[6] == "133"
    manifest = json.loads((tmp_path / "rows.csv.manifest.json").read_text())
    assert manifest["workers"] == 1
    assert manifest["configuration"]["degree"] == 4
    assert "polycensus" in manifest["versions"]


def test_exit_codes():
    code, _, err = capture(["decompose", "not-a-poly"])
    assert code == 2 and "malformed" in err
    code, _, err = capture(["count", "--degree", "4", "--height-max", "50", "--method", "oracle"])
    assert code == 2 and "budget" in err
    code, _, err = capture(["count", "--degree", "4", "--variant", "split:2,3", "--height-max", "5"])
    assert code == 2
    code, _, err = capture(["count", "--degree", "4", "--variant", "bogus", "--height-max", "5"])
    assert code == 2
    code, _, _ = capture(["count", "--degree", "4"])
    assert code == 2  # no height/grid


def test_mahler_command():
    code, out, _ = capture(["mahler", "-4,0,1"])
    assert code == 0
    assert "M(f) = 4.0" in out
    assert "root: -2.0" in out and "root: +2.0" in out
    assert "slack lower" in out and "slack upper" in out


def test_fit_command(tmp_path):
    csv_path = tmp_path / "counts.csv"
    _, body, _ = capture(["count", "--degree", "4", "--monic", "--grid", "125,250,500,1000"])
    csv_path.write_text(body)
    code, out, _ = capture(["fit", str(csv_path)])
    assert code == 0
    assert "predicted ~ H^2 * log H" in out
    assert "fitted a=" in out


def test_verify_subset():
    code, out, _ = capture(["verify", "--criteria", "4"])
    assert code == 0
    assert out.startswith("PASS  c04")
