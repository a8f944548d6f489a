import json
import subprocess
import sys

import pytest

from qtrace.cli import analyze, main, parse_grid
from qtrace.surface import spec_from_triangles


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_analyze_t3():
    rep = analyze("T3", 2, 3)
    assert rep["rank"] == 729 and rep["pi_degree"] == 27 and rep["pi_degree_invariants"] == 27
    assert rep["ok"] and all(c["ok"] for c in rep["checks"])
    assert rep["schema"] == 1 and rep["reduced"] is False


def test_analyze_s4_plain_and_reduced():
    plain = analyze("S4", 2, 3)
    red = analyze("S4", 2, 3, use_reduced=True)
    assert plain["rank"] == 6561 and red["rank"] == 81 and red["reduced"] is True
    assert plain["invariants"] == red["invariants"] and plain["params"] == red["params"]


def test_normal_form_pattern_t3_n3():
    rep = analyze("T3", 3, 5)
    assert rep["normal_form"]["pattern"]["ok"]


def test_analyze_json_is_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["analyze", "--surface", "P5", "--n", "2", "--order", "3", "--json", str(a)], capsys)[0] == 0
    assert run(["analyze", "--surface", "P5", "--n", "2", "--order", "3", "--json", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["schema"] == 1


def test_even_order_skips_theorems(capsys):
    code, out = run(["analyze", "--surface", "T3", "--n", "2", "--order", "4"], capsys)
    assert code == 0 and "skipped: center and rank" in out.out and "warning" in out.out


def test_verify(capsys):
    code, out = run(["verify", "--surface", "T3", "--n", "2", "--orders", "3", "5"], capsys)
    assert code == 0 and json.loads(out.out)["ok"]


def test_verify_even_order_keeps_identities(capsys):
    code, out = run(["verify", "--surface", "S4", "--n", "2", "--orders", "4"], capsys)
    rep = json.loads(out.out)
    assert code == 0 and rep["checks"] > 10


def test_verify_grid_in_parallel(capsys):
    code, out = run(["verify", "--surface", "S4", "--grid", "n=2,3;order=3,5", "--jobs", "2"],
                    capsys)
    assert code == 0 and json.loads(out.out)["ok"]


def test_verify_reports_failures(capsys):
    code, out = run(["verify", "--surface", "A11", "--n", "3", "--orders", "5"], capsys)
    rep = json.loads(out.out)
    assert code == 1 and [f["check"] for f in rep["failures"]] == ["reduced P' in {0,n}"]


def test_interior_puncture_gating(tmp_path, capsys):
    path = tmp_path / "wheel.json"
    path.write_text(spec_from_triangles("wheel", [(0, 1, 2), (0, 2, 3), (0, 3, 1)]).to_json())
    code, out = run(["verify", "--surface", str(path), "--n", "2", "--orders", "3"], capsys)
    rep = json.loads(out.out)
    assert code == 0 and rep["checks"] == 6
    code, out = run(["analyze", "--surface", str(path), "--n", "2", "--order", "3"], capsys)
    assert code == 0 and "interior punctures" in out.out


def test_normal_form_command(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps([[0, 2, 0], [-2, 0, 0], [0, 0, 0]]))
    code, out = run(["normal_form", "--matrix", str(path)], capsys)
    assert code == 0 and "invariants [2]  zeros 1" in out.out
    path.write_text(json.dumps({"data": [[0, 3], [-3, 0]]}))
    code, out = run(["normal_form", "--matrix", str(path)], capsys)
    assert "invariants [3]" in out.out
    path.write_text(json.dumps([[0, 1], [1, 0]]))
    assert run(["normal_form", "--matrix", str(path)], capsys)[0] == 2


def test_bad_input_exit_codes(capsys, monkeypatch):
    assert run(["analyze", "--surface", "missing.json", "--n", "2", "--order", "3"], capsys)[0] == 2
    monkeypatch.setenv("QTRACE_MAX_DIM", "5")
    code, out = run(["analyze", "--surface", "S4", "--n", "3", "--order", "5"], capsys)
    assert code == 2 and "DimensionCapExceeded" in out.err
    with pytest.raises(SystemExit):
        main(["analyze"])


def test_parse_grid():
    assert parse_grid("n=2,3;order=3,5,9,15") == ([2, 3], [3, 5, 9, 15])
    with pytest.raises(ValueError):
        parse_grid("n=2")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "qtrace", "analyze", "--surface", "A11",
                          "--n", "2", "--order", "3", "--reduced"],
                         capture_output=True, text=True, check=True)
    assert "rank 9" in out.stdout
