"""Shell-plus-sponge polyominoes P(D).

For a domain D the shell is every cell of D that touches the outside, even
diagonally; the shell is filled completely and the remaining interior is
filled with K_d. Domains are the cubes Q_i of side 2qi + 2 and the
interpolating domains D_m obtained by adding fundamental q x 1 x ... x 1 x 2
blocks in lexicographic order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from ._budget import check_capacity
from .pattern import column_modulus, kd_grid
from .polyomino import CellSet, FaceCensus, grid_census


def _full_structure(d: int) -> np.ndarray:
    return np.ones((3,) * d, dtype=bool)


def shell_grid(domain: np.ndarray) -> np.ndarray:
    """Cells of ``domain`` with an outside cell within L-infinity distance 1."""
    inner = ndimage.binary_erosion(domain, structure=_full_structure(domain.ndim), border_value=0)
    return domain & ~inner


def shell(D: CellSet) -> CellSet:
    if not len(D):
        return D
    grid, origin = D.to_grid(pad=1)
    return CellSet.from_grid(shell_grid(grid), origin)


def parallelotopes_in_cube(d: int, i: int) -> int:
    """Number of fundamental blocks tiling the interior of Q_i: (4d - 2)^(d-1) i^d."""
    return (4 * d - 2) ** (d - 1) * i**d


def cube_side(d: int, i: int) -> int:
    return 2 * column_modulus(d) * i + 2


def cube_polyomino_volume(d: int, i: int) -> int:
    """Closed form for vol(P(Q_i)) = vol(shell) + d/(2d-1) vol(interior)."""
    s = cube_side(d, i)
    inner = (s - 2) ** d
    return s**d - inner + d * inner // (2 * d - 1)


@dataclass
class Build:
    """A built polyomino with the bookkeeping of its domain."""

    dim: int
    grid: np.ndarray = field(repr=False)
    origin: np.ndarray = field(repr=False)
    vol_domain: int
    vol_shell: int
    vol_core: int
    census: FaceCensus | None = None
    params: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(np.count_nonzero(self.grid))

    @property
    def cells(self) -> CellSet:
        return CellSet.from_grid(self.grid, self.origin)

    def ensure_census(self) -> FaceCensus:
        if self.census is None:
            self.census = grid_census(self.grid)
        return self.census

    def report(self) -> dict:
        c = self.ensure_census()
        return {
            "dim": self.dim,
            "n": c.n,
            "holes": c.holes,
            "b": c.b,
            "p_h": c.p_h,
            "p_o": c.p_o,
            "vol_D": self.vol_domain,
            "vol_shell": self.vol_shell,
        }


def fill_domain(domain: np.ndarray, origin, census: bool = True) -> Build:
    """P(D): the shell of D plus K_d on the rest of D.

    ``domain`` must have an empty layer on every side so the shell is
    computed against the true outside.
    """
    d = domain.ndim
    sh = shell_grid(domain)
    core = domain & ~sh
    grid = sh | (core & kd_grid(d, origin, domain.shape))
    out = Build(
        dim=d,
        grid=grid,
        origin=np.asarray(origin, dtype=np.int64),
        vol_domain=int(np.count_nonzero(domain)),
        vol_shell=int(np.count_nonzero(sh)),
        vol_core=int(np.count_nonzero(core)),
    )
    if census:
        out.census = grid_census(grid)
    return out


def build_cube_polyomino(d: int, i: int, census: bool = True) -> Build:
    """P(Q_i) for the cube of side 2qi + 2 with lowest cell at the origin."""
    if i < 1:
        raise ValueError(f"cube index must be >= 1, got {i}")
    s = cube_side(d, i)
    check_capacity((s + 2) ** d, f"cube Q_{i} in dimension {d}")
    domain = np.zeros((s + 2,) * d, dtype=bool)
    domain[(slice(1, s + 1),) * d] = True
    out = fill_domain(domain, np.full(d, -1, dtype=np.int64), census=census)
    out.params = {"kind": "cube", "i": i}
    return out


def band_of(d: int, m: int) -> int:
    """The largest i >= 1 with (4d-2)^(d-1) i^d <= m; rejects m below Q_1."""
    if m < parallelotopes_in_cube(d, 1):
        raise ValueError(
            f"m={m} is below the first band (needs m >= {parallelotopes_in_cube(d, 1)} for d={d})"
        )
    i = 1
    while parallelotopes_in_cube(d, i + 1) <= m:
        i += 1
    return i


def extra_blocks(d: int, i: int) -> list[tuple[int, ...]]:
    """Lowest corners of the blocks of interior(Q_{i+1}) outside interior(Q_i), in lex order.

    Both interiors start at the cell (1, ..., 1); block corners sit at
    x_1 = 1 (mod q) and x_d = 1 (mod 2) on that shared grid.
    """
    q = column_modulus(d)
    counts = [2 * (i + 1)] + [2 * q * (i + 1)] * (d - 2) + [q * (i + 1)]
    inner = [2 * i] + [2 * q * i] * (d - 2) + [q * i]
    steps = [q] + [1] * (d - 2) + [2]
    corners = []
    for a in itertools.product(*(range(c) for c in counts)):
        if all(ak < lim for ak, lim in zip(a, inner)):
            continue
        corners.append(tuple(1 + ak * st for ak, st in zip(a, steps)))
    return corners


def core_domain(d: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    """D^0_m on a grid covering Q_{i+1} plus one empty layer; returns (grid, origin)."""
    i = band_of(d, m)
    q = column_modulus(d)
    side = cube_side(d, i + 1)
    check_capacity((side + 2) ** d, f"interpolated domain m={m} in dimension {d}")
    origin = np.full(d, -1, dtype=np.int64)
    core = np.zeros((side + 2,) * d, dtype=bool)
    lo = 1 - origin[0]
    core[(slice(lo, lo + 2 * q * i),) * d] = True
    extra = m - parallelotopes_in_cube(d, i)
    if extra:
        shape = [q] + [1] * (d - 2) + [2]
        for corner in extra_blocks(d, i)[:extra]:
            idx = tuple(slice(c - origin[k], c - origin[k] + shape[k]) for k, c in enumerate(corner))
            core[idx] = True
    return core, origin


def build_interpolated(d: int, m: int, census: bool = True) -> Build:
    """P(D_m): D^0_m grown by a one-cell L-infinity layer, then filled."""
    core, origin = core_domain(d, m)
    domain = ndimage.binary_dilation(core, structure=_full_structure(d))
    out = fill_domain(domain, origin, census=census)
    out.params = {"kind": "interp", "m": m, "i": band_of(d, m), "core": int(np.count_nonzero(core))}
    return out


def step_bound(d: int) -> int:
    """Largest possible growth vol(P(D_{m+1})) - vol(P(D_m)): (2d+3) 3^(d-2) 4 - (2d-2)."""
    return (2 * d + 3) * 3 ** (d - 2) * 4 - (2 * d - 2)


def _interp_volume(d: int, m: int) -> int:
    return build_interpolated(d, m, census=False).n


def best_interpolant(d: int, n: int) -> int:
    """The largest m with vol(P(D_m)) <= n; requires n >= vol(P(Q_1))."""
    if n < cube_polyomino_volume(d, 1):
        raise ValueError("no interpolated domain below P(Q_1)")
    i = 1
    while cube_polyomino_volume(d, i + 1) <= n:
        i += 1
    lo, hi = parallelotopes_in_cube(d, i), parallelotopes_in_cube(d, i + 1)
    # vol(P(D_m)) is non-decreasing in m, and vol(P(D_hi)) > n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _interp_volume(d, mid) <= n:
            lo = mid
        else:
            hi = mid
    return lo


def _small_blob(d: int, n: int) -> np.ndarray:
    side = 1
    while side**d < n:
        side += 1
    flat = np.zeros(side**d, dtype=bool)
    flat[:n] = True
    return flat.reshape((side,) * d)


def _stack_on_top(grid: np.ndarray, count: int) -> np.ndarray:
    """Append ``count`` cells above the top face (last axis), lex order, layer by layer."""
    d = grid.ndim
    grid = np.concatenate([grid, np.zeros(grid.shape[:-1] + (count,), dtype=bool)], axis=-1)
    top = int(np.nonzero(grid.any(axis=tuple(range(d - 1))))[0].max())
    layer = top
    while count:
        below = grid[..., layer]
        support = np.argwhere(below)  # lex order over the first d-1 axes
        take = support[:count]
        grid[tuple(take.T) + (layer + 1,)] = True
        count -= len(take)
        layer += 1
    return grid


def build_for_n(d: int, n: int) -> Build:
    """A rook-connected polyomino with exactly ``n`` cells and many holes.

    From vol(P(Q_1)) upwards this is P(D_m) for the largest fitting m,
    topped up with cells stacked above its highest layer. Below that it is a
    lexicographic prefix of a small cube.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    column_modulus(d)
    if n < cube_polyomino_volume(d, 1):
        grid = _small_blob(d, n)
        out = Build(d, grid, np.zeros(d, dtype=np.int64), vol_domain=n, vol_shell=n, vol_core=0)
        out.params = {"kind": "blob"}
        out.census = grid_census(grid)
        return out
    m = best_interpolant(d, n)
    base = build_interpolated(d, m, census=False)
    extra = n - base.n
    grid = _stack_on_top(base.grid, extra) if extra else base.grid
    out = Build(d, grid, base.origin, base.vol_domain, base.vol_shell, base.vol_core)
    out.params = {"kind": "n", "m": m, "appended": extra}
    out.census = grid_census(grid)
    return out
