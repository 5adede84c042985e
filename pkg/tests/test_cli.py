import json

import pytest

from holey import cli
from holey.builder import build_cube_polyomino
from holey.polyomino import CellSet, load_cells, save_cells

RING = [(x, y) for x in range(3) for y in range(3) if (x, y) != (1, 1)]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_analyze_ring(tmp_path, capsys):
    path = tmp_path / "ring.cells"
    save_cells(CellSet(RING), path)
    code, rep = run_json(capsys, "analyze", str(path))
    assert code == 0
    assert rep["holes"] == 1 and rep["identity_ok"] and rep["connected"]
    assert (rep["b"], rep["p_h"], rep["p_o"]) == (8, 4, 12)
    assert list(rep) == ["dim", "n", "holes", "b", "p_h", "p_o", "identity_ok", "connected", "lower", "upper"]


def test_analyze_single_cell(tmp_path, capsys):
    path = tmp_path / "one.cells"
    path.write_text("d 2\n0 0\n")
    code, rep = run_json(capsys, "analyze", str(path))
    assert code == 0
    assert (rep["holes"], rep["upper"]) == (0, 0)


def test_analyze_cube_polyomino(tmp_path, capsys):
    path = tmp_path / "q1.cells"
    assert run(capsys, "build", "cube", "-d", "2", "-i", "1", "--out", str(path))[0] == 0
    code, rep = run_json(capsys, "analyze", str(path))
    assert code == 0
    assert rep["lower"] == 12 == rep["holes"] <= rep["upper"]


def test_round_trip_of_built_object(tmp_path, capsys):
    path = tmp_path / "q1.cells"
    code, rep = run_json(capsys, "build", "cube", "-d", "2", "-i", "1", "--out", str(path))
    assert code == 0
    assert rep["n"] == 52 and rep["holes"] == 12
    assert rep["vol_D"] == 64 and rep["vol_shell"] == 28
    s = load_cells(path)
    assert len(s) == 52
    again = tmp_path / "again.cells"
    save_cells(s, again)
    assert again.read_text() == path.read_text()


def test_build_interp_and_n(capsys):
    code, rep = run_json(capsys, "build", "interp", "-d", "2", "-m", "7")
    assert code == 0 and rep["params"]["m"] == 7
    code, rep = run_json(capsys, "build", "n", "-d", "2", "-n", "60")
    assert code == 0 and rep["n"] == 60


def test_malformed_file_is_usage_error(tmp_path, capsys):
    path = tmp_path / "bad.cells"
    path.write_text("d 2\n0 0\n0 0\n")
    code, out, err = run(capsys, "analyze", str(path))
    assert code == 2
    assert "line 3" in err
    assert out == ""


def test_missing_file_is_usage_error(tmp_path, capsys):
    assert run(capsys, "analyze", str(tmp_path / "nope.cells"))[0] == 2


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["build", "cube", "-d", "2"])
    assert exc.value.code == 2


def test_capacity_via_env(monkeypatch, capsys):
    monkeypatch.setenv("HOLEY_CELL_BUDGET", "50")
    code, out, err = run(capsys, "build", "cube", "-d", "2", "-i", "1")
    assert code == 3
    assert "budget" in err


def test_capacity_via_flag(capsys):
    assert run(capsys, "--budget", "50", "build", "cube", "-d", "2", "-i", "1")[0] == 3
    assert run(capsys, "--budget", "1000", "build", "cube", "-d", "2", "-i", "1")[0] == 0


def test_flag_overrides_env(monkeypatch, capsys):
    monkeypatch.setenv("HOLEY_CELL_BUDGET", "50")
    assert run(capsys, "--budget", "1000", "build", "cube", "-d", "2", "-i", "1")[0] == 0


def test_bruteforce_capacity(capsys):
    assert run(capsys, "bruteforce", "-d", "2", "-n", "13")[0] == 3
    assert run(capsys, "bruteforce", "-d", "2", "-n", "6", "--max-n", "5")[0] == 3


def test_export_single_cell(tmp_path, capsys):
    src, dst = tmp_path / "c.cells", tmp_path / "c.obj"
    src.write_text("d 3\n0 0 0\n")
    code, rep = run_json(capsys, "export", "obj", str(src), str(dst))
    assert code == 0
    lines = dst.read_text().splitlines()
    assert sum(l.startswith("v ") for l in lines) == 8
    assert sum(l.startswith("f ") for l in lines) == 12
    assert rep == {"cubes": 1, "vertices": 8, "faces": 12}
    coords = {tuple(map(float, l.split()[1:])) for l in lines if l.startswith("v ")}
    assert coords == {(x, y, z) for x in (-0.5, 0.5) for y in (-0.5, 0.5) for z in (-0.5, 0.5)}


def test_export_two_disjoint_cells(tmp_path, capsys):
    src, dst = tmp_path / "c.cells", tmp_path / "c.obj"
    src.write_text("d 3\n0 0 0\n5 0 0\n")
    _, rep = run_json(capsys, "export", "obj", str(src), str(dst))
    assert rep["vertices"] == 16
    _, rep = run_json(capsys, "export", "obj", str(src), str(dst), "--dedup")
    assert rep["vertices"] == 16


def test_export_dedup_shares_vertices(tmp_path, capsys):
    src, dst = tmp_path / "c.cells", tmp_path / "c.obj"
    src.write_text("d 3\n0 0 0\n1 0 0\n")
    _, rep = run_json(capsys, "export", "obj", str(src), str(dst), "--dedup")
    assert rep["vertices"] == 12
    faces = [l for l in dst.read_text().splitlines() if l.startswith("f ")]
    assert max(int(v) for f in faces for v in f.split()[1:]) == 12


def test_export_cube_polyomino_3d(tmp_path, capsys):
    src, dst = tmp_path / "q.cells", tmp_path / "q.obj"
    save_cells(build_cube_polyomino(3, 1, census=False).cells, src)
    _, rep = run_json(capsys, "export", "obj", str(src), str(dst))
    assert rep["cubes"] == 1328
    assert rep["vertices"] <= 8 * 1328
    assert dst.read_text().startswith("# 1328 cubes\n")


def test_export_rejects_2d(tmp_path, capsys):
    src = tmp_path / "c.cells"
    src.write_text("d 2\n0 0\n")
    code, _, err = run(capsys, "export", "obj", str(src), str(tmp_path / "x.obj"))
    assert code == 2
    assert "d=2" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["build", "interp", "-d", "3", "-m", "150"],
        ["bounds", "-d", "2", "-n", "9", "--exact"],
        ["torus", "build", "-d", "3", "--n", "2,3", "--c", "5"],
        ["torus", "search", "-d", "2", "--max", "8"],
        ["pattern", "sample", "-d", "3", "--box", "0..4"],
        ["code", "gen", "-d", "2"],
    ],
)
def test_deterministic_output(capsys, argv):
    a = run(capsys, *argv)
    b = run(capsys, *argv)
    assert a == b


def test_build_files_byte_identical(tmp_path, capsys):
    p1, p2 = tmp_path / "a.cells", tmp_path / "b.cells"
    run(capsys, "build", "n", "-d", "3", "-n", "1400", "--out", str(p1))
    run(capsys, "build", "n", "-d", "3", "-n", "1400", "--out", str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_torus_systole(capsys):
    code, rep = run_json(capsys, "torus", "systole", "--basis", "6 0; -3 3")
    assert code == 0
    assert rep["systole_sq"] == 18 and isinstance(rep["systole_sq"], int)
    assert rep["systole"] == pytest.approx(18**0.5)
    assert rep["det"] == 18


def test_torus_systole_bad_basis(capsys):
    assert run(capsys, "torus", "systole", "--basis", "1 2; 2 4")[0] == 2
    assert run(capsys, "torus", "systole", "--basis", "1 x; 0 1")[0] == 2


def test_torus_build(tmp_path, capsys):
    out = tmp_path / "t.cells"
    code, rep = run_json(capsys, "torus", "build", "-d", "2", "--n", "2", "--c", "3", "--out", str(out))
    assert code == 0
    assert (rep["det"], rep["tiles"], rep["holes"], rep["toric_upper_bound"]) == (18, 12, 6, 6)
    assert len(load_cells(out)) == 12


def test_torus_build_precondition(capsys):
    code, _, err = run(capsys, "torus", "build", "-d", "2", "--n", "3", "--c", "3")
    assert code == 2
    assert "n_1 must be even" in err


def test_torus_search_top(capsys):
    code, rep = run_json(capsys, "torus", "search", "-d", "2", "--max", "6", "--top", "3")
    assert code == 0 and len(rep["results"]) == 3


def test_pattern_sample(tmp_path, capsys):
    code, out, _ = run(capsys, "pattern", "sample", "-d", "2", "--box", "0..2,1")
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert lines == ["d 2", "0 0", "0 1", "1 1", "2 0"]
    dst = tmp_path / "k.cells"
    run(capsys, "pattern", "sample", "-d", "3", "--box", "0,0,0..4,4,9", "--out", str(dst))
    assert len(load_cells(dst)) > 0


@pytest.mark.parametrize("box", ["0-3", "0,0,0..1", "3..1"])
def test_pattern_sample_bad_box(capsys, box):
    assert run(capsys, "pattern", "sample", "-d", "2", "--box", box)[0] == 2


def test_code_gen_and_verify(capsys):
    code, rep = run_json(capsys, "code", "gen", "-d", "2")
    assert code == 0
    assert rep["modulus"] == 5 and rep["count"] == 5
    assert all((a + 2 * b) % 5 == 0 for a, b in rep["words"])
    code, rep = run_json(capsys, "code", "verify", "-d", "3")
    assert code == 0 and rep["covered_once"] and rep["row_property"]


def test_bounds_exact(capsys):
    code, rep = run_json(capsys, "bounds", "-d", "2", "-n", "7", "--exact")
    assert code == 0
    assert rep["exact"] == 1 and rep["upper"] == 1
    assert rep["displayed_upper"] == 0 and rep["displayed_upper_violated"]
    assert all(isinstance(v, (int, bool)) or v is None for v in rep.values())


def test_bruteforce(capsys):
    code, rep = run_json(capsys, "bruteforce", "-d", "2", "-n", "7", "--jobs", "1")
    assert code == 0
    assert (rep["max_holes"], rep["count"]) == (1, 760)
    assert len(rep["witness"]) == 7
