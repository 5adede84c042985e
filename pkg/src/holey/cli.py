"""Command-line front end.

Exit status: 0 ok, 1 invariant violated, 2 usage or input error,
3 capacity exceeded (see HOLEY_CELL_BUDGET).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence, TextIO

from . import bounds, builder, lee_code, pattern, polyomino, torus
from ._budget import CapacityError, budget_override

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3


class UsageError(ValueError):
    pass


def _emit(obj: dict, stream: TextIO | None = None) -> None:
    stream = stream or sys.stdout
    json.dump(obj, stream, indent=2)
    stream.write("\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def parse_box(text: str, d: int) -> tuple[list[int], list[int]]:
    """``lo..hi`` where each side is one integer or d comma-separated integers."""
    if ".." not in text:
        raise UsageError(f"box must look like lo..hi, got {text!r}")
    lo_s, hi_s = text.split("..", 1)
    lo, hi = _int_list(lo_s), _int_list(hi_s)
    if len(lo) == 1:
        lo = lo * d
    if len(hi) == 1:
        hi = hi * d
    if len(lo) != d or len(hi) != d:
        raise UsageError(f"box corners need 1 or {d} coordinates")
    if any(a > b for a, b in zip(lo, hi)):
        raise UsageError("box lower corner exceeds upper corner")
    return lo, hi


def parse_basis(text: str) -> torus.IntegerLattice:
    rows = [r.split() for r in text.split(";") if r.strip()]
    try:
        return torus.IntegerLattice([[int(v) for v in r] for r in rows])
    except ValueError as exc:
        raise UsageError(f"bad basis {text!r}: {exc}") from None


def parse_cells(path: str) -> polyomino.CellSet:
    return polyomino.load_cells(path)


def census_report(s: polyomino.CellSet) -> dict:
    c = polyomino.face_census(s)
    n = c.n
    return {
        "dim": s.dim,
        "n": n,
        "holes": c.holes,
        "b": c.b,
        "p_h": c.p_h,
        "p_o": c.p_o,
        "identity_ok": c.identity_ok,
        "connected": polyomino.is_rook_connected(s),
        "lower": bounds.lower_bound(s.dim, n) if n else 0,
        "upper": bounds.upper_bound(s.dim, n) if n else 0,
    }


def analyze(path: str) -> dict:
    return census_report(parse_cells(path))


# -- OBJ export -------------------------------------------------------------------

_CUBE_TRIANGLES = [
    (0, 2, 1), (1, 2, 3),  # x = -1/2
    (4, 5, 6), (5, 7, 6),  # x = +1/2
    (0, 1, 4), (1, 5, 4),  # y = -1/2
    (2, 6, 3), (3, 6, 7),  # y = +1/2
    (0, 4, 2), (2, 4, 6),  # z = -1/2
    (1, 3, 5), (3, 7, 5),  # z = +1/2
]


def write_obj(s: polyomino.CellSet, stream: TextIO, dedup: bool = False) -> dict:
    """One unit cube per cell; corners are written at half-integer coordinates."""
    if s.dim != 3:
        raise UsageError(f"OBJ export needs a 3-dimensional cell file, got d={s.dim}")
    index: dict[tuple[int, int, int], int] = {}
    verts: list[tuple[int, int, int]] = []
    faces: list[tuple[int, int, int]] = []
    for x, y, z in s:
        corner_ids = []
        for dx in (0, 1):
            for dy in (0, 1):
                for dz in (0, 1):
                    key = (2 * x + 2 * dx - 1, 2 * y + 2 * dy - 1, 2 * z + 2 * dz - 1)
                    if dedup and key in index:
                        corner_ids.append(index[key])
                        continue
                    verts.append(key)
                    index[key] = len(verts)
                    corner_ids.append(len(verts))
        faces.extend(tuple(corner_ids[k] for k in tri) for tri in _CUBE_TRIANGLES)
    stream.write(f"# {len(s)} cubes\n")
    for v in verts:
        stream.write("v " + " ".join(f"{c / 2:g}" for c in v) + "\n")
    for f in faces:
        stream.write(f"f {f[0]} {f[1]} {f[2]}\n")
    return {"cubes": len(s), "vertices": len(verts), "faces": len(faces)}


def export_obj(path_in: str, path_out: str, dedup: bool = False) -> dict:
    s = parse_cells(path_in)
    if s.dim != 3:
        raise UsageError(f"OBJ export needs a 3-dimensional cell file, got d={s.dim}")
    with open(path_out, "w", encoding="utf-8") as fh:
        return write_obj(s, fh, dedup=dedup)


# -- subcommands ------------------------------------------------------------------


def _cmd_code_gen(args) -> int:
    code = lee_code.code_words(args.d)
    _emit({"dim": code.dim, "modulus": code.modulus, "count": len(code), "words": sorted(map(list, code.words))})
    return EXIT_OK


def _cmd_code_verify(args) -> int:
    rep = lee_code.verify_perfect(args.d)
    rep = {"dim": args.d, "modulus": lee_code.modulus(args.d), **rep, "row_property": lee_code.row_property(args.d)}
    _emit(rep)
    return EXIT_OK if rep["covered_once"] and rep["row_property"] else EXIT_INVARIANT


def _cmd_pattern_sample(args) -> int:
    lo, hi = parse_box(args.box, args.d)
    cells = pattern.sample(args.d, lo, hi)
    s = polyomino.CellSet(cells, dim=args.d)
    comment = f"K_{args.d} cells in window {lo}..{hi}"
    if args.out:
        polyomino.save_cells(s, args.out, comment)
    else:
        polyomino.write_cells(s, sys.stdout, comment)
    return EXIT_OK


def _finish_build(b: builder.Build, args) -> int:
    rep = b.report()
    rep["params"] = b.params
    if args.out:
        polyomino.save_cells(b.cells, args.out)
    _emit(rep)
    c = b.ensure_census()
    return EXIT_OK if c.identity_ok else EXIT_INVARIANT


def _cmd_build_cube(args) -> int:
    return _finish_build(builder.build_cube_polyomino(args.d, args.i), args)


def _cmd_build_interp(args) -> int:
    return _finish_build(builder.build_interpolated(args.d, args.m), args)


def _cmd_build_n(args) -> int:
    return _finish_build(builder.build_for_n(args.d, args.n), args)


def _cmd_analyze(args) -> int:
    rep = analyze(args.path)
    _emit(rep)
    return EXIT_OK if rep["identity_ok"] else EXIT_INVARIANT


def _cmd_bounds(args) -> int:
    rep = bounds.bound_report(args.d, args.n, exact=args.exact, jobs=args.jobs, max_n=args.max_n)
    _emit(rep.as_dict())
    return EXIT_OK if rep.consistent() else EXIT_INVARIANT


def _cmd_bruteforce(args) -> int:
    _emit(bounds.brute_force(args.d, args.n, jobs=args.jobs, max_n=args.max_n))
    return EXIT_OK


def _cmd_torus_build(args) -> int:
    T, rep = torus.build_optimal_torus(args.d, _int_list(args.n), args.c)
    rep["toric_upper_bound"] = bounds.toric_upper_bound(args.d, rep["tiles"])
    if args.out:
        cells = polyomino.CellSet(T.cells(), dim=args.d)
        polyomino.save_cells(cells, args.out, comment="occupied coset representatives")
    _emit(rep)
    ok = rep["connected"] and rep["identity_ok"] and rep["holes"] <= rep["toric_upper_bound"]
    return EXIT_OK if ok else EXIT_INVARIANT


def _cmd_torus_systole(args) -> int:
    L = parse_basis(args.basis)
    sq, vec = torus.shortest_vector(L)
    _emit(
        {
            "dim": L.dim,
            "basis": [list(r) for r in L.basis],
            "hnf": [list(r) for r in L.hnf],
            "det": L.det,
            "systole_sq": sq,
            "systole": math.sqrt(sq),
            "vector": list(vec),
        }
    )
    return EXIT_OK


def _cmd_torus_search(args) -> int:
    rows = torus.search_fat_tori(args.d, args.max, limit=args.top)
    _emit({"dim": args.d, "max": args.max, "results": rows})
    return EXIT_OK


def _cmd_export_obj(args) -> int:
    _emit(export_obj(args.path_in, args.path_out, dedup=args.dedup))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holey", description="Polyominoes with many holes.")
    p.add_argument("--budget", type=int, default=None, help="cell budget (overrides HOLEY_CELL_BUDGET)")
    sub = p.add_subparsers(dest="command", required=True)

    code = sub.add_parser("code", help="perfect Lee codes").add_subparsers(dest="action", required=True)
    c = code.add_parser("gen")
    c.add_argument("-d", type=int, required=True)
    c.set_defaults(func=_cmd_code_gen)
    c = code.add_parser("verify")
    c.add_argument("-d", type=int, required=True)
    c.set_defaults(func=_cmd_code_verify)

    pat = sub.add_parser("pattern", help="the K_d pattern").add_subparsers(dest="action", required=True)
    c = pat.add_parser("sample")
    c.add_argument("-d", type=int, required=True)
    c.add_argument("--box", required=True, help="lo..hi, e.g. 0..9 or 0,0,0..4,4,9")
    c.add_argument("--out")
    c.set_defaults(func=_cmd_pattern_sample)

    bld = sub.add_parser("build", help="constructions").add_subparsers(dest="action", required=True)
    c = bld.add_parser("cube")
    c.add_argument("-d", type=int, required=True)
    c.add_argument("-i", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(func=_cmd_build_cube)
    c = bld.add_parser("interp")
    c.add_argument("-d", type=int, required=True)
    c.add_argument("-m", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(func=_cmd_build_interp)
    c = bld.add_parser("n")
    c.add_argument("-d", type=int, required=True)
    c.add_argument("-n", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(func=_cmd_build_n)

    c = sub.add_parser("analyze", help="census of a cell file")
    c.add_argument("path")
    c.set_defaults(func=_cmd_analyze)

    c = sub.add_parser("bounds", help="lower/upper bounds on f_d(n)")
    c.add_argument("-d", type=int, required=True)
    c.add_argument("-n", type=int, required=True)
    c.add_argument("--exact", action="store_true")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--max-n", type=int, default=None)
    c.set_defaults(func=_cmd_bounds)

    c = sub.add_parser("bruteforce", help="exhaustive f_d(n)")
    c.add_argument("-d", type=int, required=True)
    c.add_argument("-n", type=int, required=True)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--max-n", type=int, default=None)
    c.set_defaults(func=_cmd_bruteforce)

    tor = sub.add_parser("torus", help="toric polyominoes").add_subparsers(dest="action", required=True)
    c = tor.add_parser("build")
    c.add_argument("-d", type=int, required=True)
    c.add_argument("--n", required=True, help="comma-separated n_1..n_{d-1}")
    c.add_argument("--c", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(func=_cmd_torus_build)
    c = tor.add_parser("systole")
    c.add_argument("--basis", required=True, help='rows separated by ";", e.g. "6 0; -3 3"')
    c.set_defaults(func=_cmd_torus_systole)
    c = tor.add_parser("search")
    c.add_argument("-d", type=int, required=True)
    c.add_argument("--max", type=int, default=20)
    c.add_argument("--top", type=int, default=None)
    c.set_defaults(func=_cmd_torus_search)

    exp = sub.add_parser("export", help="mesh export").add_subparsers(dest="action", required=True)
    c = exp.add_parser("obj")
    c.add_argument("path_in")
    c.add_argument("path_out")
    c.add_argument("--dedup", action="store_true", help="share vertices between cubes")
    c.set_defaults(func=_cmd_export_obj)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with budget_override(args.budget):
            return args.func(args)
    except CapacityError as exc:
        print(f"holey: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValueError, OSError) as exc:
        print(f"holey: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
