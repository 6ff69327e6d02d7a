from __future__ import annotations

import json
import os

import pytest

from convex_layers import cli
from convex_layers.geometry import make_points
from convex_layers.layers import counterexample_fixture, peel_layers
from convex_layers.pointfile import InputError, format_points, parse_points, read_points, write_points

SQUARE = "0,0\n10,1\n9,11\n-1,10\n5,5\n"


@pytest.fixture
def square(tmp_path):
    f = tmp_path / "square.txt"
    f.write_text(SQUARE)
    return f


@pytest.fixture
def fixture_file(tmp_path):
    f = tmp_path / "fixture.txt"
    write_points(f, counterexample_fixture())
    return f


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# -- point files -------------------------------------------------------------------

def test_parse_comments_header_and_ids():
    pts = parse_points(["x,y", "# note", "1, 2  # trailing", "", "3,4"])
    assert [(p.id, p.x, p.y) for p in pts] == [(0, 1, 2), (1, 3, 4)]


@pytest.mark.parametrize("lines,msg", [
    (["1,2", "a,3"], r":2: 'a' is not an integer"),
    (["1,2,3"], r":1: expected 'x,y'"),
    (["1,2", "5,5", "1,2"], r":3: duplicate point \(1, 2\): ids 0 \(line 1\) and 2"),
    (["2000000000,0"], "bound"),
    (["1.5,2"], "not an integer"),
])
def test_parse_errors(lines, msg):
    with pytest.raises(InputError, match=msg):
        parse_points(lines)


def test_parse_decimal_scale():
    pts = parse_points(["0.25,-1.5", "3,4"], scale=2)
    assert [(p.x, p.y) for p in pts] == [(25, -150), (300, 400)]
    with pytest.raises(InputError, match="refusing to round"):
        parse_points(["0.125,1"], scale=2)
    with pytest.raises(InputError, match="not a number"):
        parse_points(["abc,1"], scale=2)
    with pytest.raises(InputError, match="not finite"):
        parse_points(["inf,1"], scale=2)


def test_write_read_round_trip(tmp_path):
    pts = make_points([(1, 2), (-3, 4)])
    f = tmp_path / "p.txt"
    write_points(f, pts)
    assert read_points(f) == pts
    assert format_points(pts) == "1,2\n-3,4\n"
    with pytest.raises(InputError, match="cannot read"):
        read_points(tmp_path / "missing.txt")


# -- compute -------------------------------------------------------------------------

def test_compute_json(capsys, square):
    code, out, _ = run(capsys, "compute", "--input", square)
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == 5 and doc["k"] == 2
    assert [len(layer) for layer in doc["layers"]] == [4, 1]


def test_compute_csv(capsys, square):
    code, out, _ = run(capsys, "compute", "--input", square, "--format", "csv")
    rows = out.strip().splitlines()
    assert code == 0 and rows[0] == "layer,idx,x,y"
    assert rows[1:] == ["1,0,-1,10", "1,1,0,0", "1,2,10,1", "1,3,9,11", "2,0,5,5"]


def test_compute_fixture_modes(capsys, fixture_file):
    _, out, _ = run(capsys, "compute", "--input", fixture_file, "--mode", "purge")
    doc = json.loads(out)
    assert doc["k"] == 2 and [len(layer) for layer in doc["layers"]] == [5, 5]
    _, out, _ = run(capsys, "compute", "--input", fixture_file, "--mode", "literal")
    assert json.loads(out)["k"] == 3


def test_compute_round_trip_depths(capsys, tmp_path):
    f = tmp_path / "disk.txt"
    assert run(capsys, "gen", "--kind", "uniform-disk", "--n", 300, "--seed", 4, "--out", f)[0] == 0
    _, out, _ = run(capsys, "compute", "--input", f)
    doc = json.loads(out)
    depth_of = {tuple(v): i for i, layer in enumerate(doc["layers"], 1) for v in layer}
    pts = read_points(f)
    ls = peel_layers(make_points([(p.x, p.y) for p in pts]))
    assert all(depth_of[(p.x, p.y)] == ls.depth[p.id] for p in pts)


def test_compute_max_layers(capsys, tmp_path):
    f = tmp_path / "rings.txt"
    run(capsys, "gen", "--kind", "nested-rings", "--n", 40, "--out", f)
    _, out, _ = run(capsys, "compute", "--input", f, "--max-layers", 2)
    assert json.loads(out)["k"] == 2


def test_compute_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1,2\n1,2\n")
    code, _, err = run(capsys, "compute", "--input", bad)
    assert code == 2 and "duplicate" in err
    code, _, err = run(capsys, "compute", "--input", tmp_path / "nope.txt")
    assert code == 2


def test_internal_failure_exit_code(capsys, square, monkeypatch):
    from convex_layers.hulltree import InvariantError

    def boom(*a, **k):
        raise InvariantError("convexity at 01: injected")

    monkeypatch.setattr(cli, "peel_layers", boom)
    code, _, err = run(capsys, "compute", "--input", square)
    assert code == 3 and "convexity" in err


# -- verify --------------------------------------------------------------------------

def test_verify_generated(capsys):
    code, out, _ = run(capsys, "verify", "--gen", "uniform-square", "--n", 256, "--trials", 10)
    assert code == 0 and "10 instance(s)" in out
    code, _, _ = run(capsys, "verify", "--gen", "collinear", "--n", 9)
    assert code == 0


def test_verify_fixture_literal_flags_point(capsys, fixture_file):
    code, out, _ = run(capsys, "verify", "--input", fixture_file, "--mode", "literal")
    assert code == 1
    assert "(20,50): oracle layer 2, engine layer 3" in out
    assert "minimized instance" in out
    code, _, _ = run(capsys, "verify", "--input", fixture_file)
    assert code == 0


def test_verify_needs_a_source(capsys):
    assert run(capsys, "verify")[0] == 2


# -- bench / gen / plot --------------------------------------------------------------

def test_parse_sizes():
    assert cli.parse_sizes("2^10..2^12") == [1024, 2048, 4096]
    assert cli.parse_sizes("3") == [3]
    assert cli.parse_sizes("8,16") == [8, 16]
    with pytest.raises(InputError):
        cli.parse_sizes("x..y")


def test_bench_smoke(capsys):
    code, out, _ = run(capsys, "bench", "--sizes", "3")
    assert code == 0
    row = out.splitlines()[1].split()
    assert row[0] == "3" and row[1] == "1"


def test_bench_table_and_verdict(capsys):
    code, out, _ = run(capsys, "bench", "--sizes", "2^6..2^9", "--algo", "both")
    assert code == 0
    assert "build: scans/(n lg n)" in out and "peel: scans/(n lg n)" in out
    assert "brute/tree" in out.splitlines()[0]


def test_gen_circle_twelve_lines(capsys, tmp_path):
    f = tmp_path / "c.txt"
    assert run(capsys, "gen", "--kind", "circle", "--n", 12, "--seed", 1, "--out", f)[0] == 0
    assert len(f.read_text().splitlines()) == 12
    again = tmp_path / "c2.txt"
    run(capsys, "gen", "--kind", "circle", "--n", 12, "--seed", 1, "--out", again)
    assert f.read_text() == again.read_text()


def test_gen_errors(capsys, tmp_path):
    assert run(capsys, "gen", "--kind", "grid", "--n", 15, "--out", tmp_path / "g.txt")[0] == 2
    assert run(capsys, "gen", "--kind", "grid", "--n", 16, "--out", tmp_path / "no" / "g.txt")[0] == 2


def test_plot_square(capsys, square, tmp_path):
    out = tmp_path / "sq.svg"
    assert run(capsys, "plot", "--input", square, "--out", out)[0] == 0
    svg = out.read_text()
    assert svg.startswith("<svg") and svg.count("<polygon") == 1 and svg.count("<circle") == 5


def test_plot_fixture_nested(capsys, fixture_file, tmp_path):
    out = tmp_path / "fx.svg"
    run(capsys, "plot", "--input", fixture_file, "--out", out)
    svg = out.read_text()
    assert svg.count("<polygon") == 2


def test_plot_degenerate_layers(capsys, tmp_path):
    f = tmp_path / "col.txt"
    f.write_text("0,0\n1,1\n2,2\n3,3\n4,4\n")
    out = tmp_path / "col.svg"
    run(capsys, "plot", "--input", f, "--out", out)
    svg = out.read_text()
    assert svg.count("<line") == 2 and svg.count("<polygon") == 0


@pytest.mark.skipif(os.geteuid() == 0, reason="root can write anywhere")
def test_plot_unwritable(capsys, square, tmp_path):
    d = tmp_path / "ro"
    d.mkdir()
    d.chmod(0o500)
    assert run(capsys, "plot", "--input", square, "--out", d / "x.svg")[0] == 2


def test_plot_missing_directory(capsys, square, tmp_path):
    assert run(capsys, "plot", "--input", square, "--out", tmp_path / "no" / "x.svg")[0] == 2
