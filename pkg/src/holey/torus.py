"""Integer lattices, flat tori Z^d / L and toric polyominoes.

A lattice is stored by a basis whose rows are generators. Its Hermite normal
form H is lower triangular with positive diagonal and off-diagonal entries
reduced into ``[0, H[j][j])``; the box ``0 <= x_k < H[k][k]`` then holds one
representative of every coset, and :meth:`IntegerLattice.reduce` finds it by
back-substitution from the last coordinate to the first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ._budget import check_capacity
from .pattern import column_modulus, kd_mask


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant needs a square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Lower-triangular row-style HNF of a full-rank square integer matrix."""
    a = [list(map(int, r)) for r in rows]
    d = len(a)
    for k in range(d - 1, -1, -1):
        # gcd-eliminate column k among rows 0..k, leaving the survivor in row k
        while True:
            nz = [r for r in range(k + 1) if a[r][k] != 0]
            if not nz:
                raise ValueError("basis is not full rank")
            p = min(nz, key=lambda r: abs(a[r][k]))
            done = True
            for r in nz:
                if r == p:
                    continue
                f = a[r][k] // a[p][k]
                a[r] = [x - f * y for x, y in zip(a[r], a[p])]
                if a[r][k]:
                    done = False
            if done:
                break
        a[p], a[k] = a[k], a[p]
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
    for i in range(d):
        for j in range(i - 1, -1, -1):
            f = a[i][j] // a[j][j]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[j])]
    return a


@dataclass(frozen=True)
class IntegerLattice:
    basis: tuple[tuple[int, ...], ...]

    def __init__(self, basis: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(v) for v in r) for r in basis)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("basis must be a non-empty square matrix")
        object.__setattr__(self, "basis", rows)
        if bareiss_det(rows) == 0:
            raise ValueError("basis is not full rank")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def hnf(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(r) for r in hermite_normal_form(self.basis))

    @cached_property
    def det(self) -> int:
        return abs(bareiss_det(self.basis))

    @cached_property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.hnf[k][k] for k in range(self.dim))

    @cached_property
    def _hnf_array(self) -> np.ndarray:
        return np.array(self.hnf, dtype=np.int64)

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        """The coset representative of ``x`` inside the HNF box."""
        if len(x) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(x)}")
        v = [int(c) for c in x]
        for k in range(self.dim - 1, -1, -1):
            row = self.hnf[k]
            f = v[k] // row[k]
            if f:
                for j in range(k + 1):
                    v[j] -= f * row[j]
        return tuple(v)

    def reduce_many(self, pts: np.ndarray) -> np.ndarray:
        v = np.array(pts, dtype=np.int64, copy=True)
        H = self._hnf_array
        for k in range(self.dim - 1, -1, -1):
            f = np.floor_divide(v[:, k], H[k, k])
            v[:, : k + 1] -= f[:, None] * H[k, : k + 1]
        return v

    def contains(self, x: Sequence[int]) -> bool:
        return all(c == 0 for c in self.reduce(x))

    def scaled(self, k: int) -> "IntegerLattice":
        return IntegerLattice([[k * v for v in r] for r in self.basis])

    def index_of(self, reps: np.ndarray) -> np.ndarray:
        """Mixed-radix index of reduced representatives (last coordinate fastest)."""
        idx = np.zeros(len(reps), dtype=np.int64)
        for k in range(self.dim):
            idx = idx * self.diagonal[k] + reps[:, k]
        return idx


def fundamental_domain(L: IntegerLattice, budget: int | None = None) -> np.ndarray:
    """All ``det`` coset representatives, as a ``(det, d)`` array in index order."""
    check_capacity(L.det, "fundamental domain", budget)
    grids = np.meshgrid(*(np.arange(h, dtype=np.int64) for h in L.diagonal), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def is_sublattice(A: IntegerLattice, B: IntegerLattice) -> bool:
    if A.dim != B.dim:
        raise ValueError(f"dimension mismatch: {A.dim} vs {B.dim}")
    return all(B.contains(g) for g in A.basis)


def code_lattice_basis(d: int) -> list[list[int]]:
    """Basis of the lifted (d-1)-dimensional code times Z, as d x d rows."""
    q = column_modulus(d)
    rows = []
    first = [0] * d
    first[0] = q
    rows.append(first)
    for k in range(2, d):
        r = [0] * d
        r[k - 1] = 1
        r[0] = -k
        rows.append(r)
    last = [0] * d
    last[d - 1] = 1
    rows.append(last)
    return rows


def lambda0(d: int) -> IntegerLattice:
    """Points over the lifted code columns whose coordinate sum is even."""
    rows = code_lattice_basis(d)
    even = []
    for r in rows[:-1]:
        if sum(r) % 2:
            r = r[:-1] + [r[-1] + 1]
        even.append(r)
    top = [0] * d
    top[-1] = 2
    even.append(top)
    return IntegerLattice(even)


def torus_basis_vectors(d: int) -> list[list[int]]:
    """u_1 .. u_{d-1}: a basis of the lifted code inside Z^(d-1) x {0}."""
    q = column_modulus(d)
    us = []
    for i in range(1, d):
        u = [0] * d
        if i == 1:
            u[0] = q
        elif i % 2:
            u[i - 1] = 1
            u[0] = -i
        else:
            u[i - 1] = 1
            u[0] = q - i
        us.append(u)
    return us


def optimal_lattice(d: int, n_list: Sequence[int], c: int) -> IntegerLattice:
    """Lattice generated by n_i u_i and c e_d - sum(u_i); validates its parameters."""
    column_modulus(d)
    n_list = [int(v) for v in n_list]
    if len(n_list) != d - 1:
        raise ValueError(f"need {d - 1} values in n_list for d={d}, got {len(n_list)}")
    if any(v < 1 for v in n_list) or c < 1:
        raise ValueError("n_list entries and c must be positive")
    if n_list[0] % 2:
        raise ValueError(f"n_1 must be even, got {n_list[0]}")
    if c % 2 == 0:
        raise ValueError(f"c must be odd, got {c}")
    for (i, a), (j, b) in itertools.combinations(enumerate(n_list, start=1), 2):
        if math.gcd(a, b) != 1:
            raise ValueError(f"n_{i}={a} and n_{j}={b} are not coprime")
    us = torus_basis_vectors(d)
    rows = [[n * x for x in u] for n, u in zip(n_list, us)]
    last = [-sum(u[k] for u in us) for k in range(d)]
    last[d - 1] += c
    rows.append(last)
    return IntegerLattice(rows)


@dataclass
class TorusPolyomino:
    lattice: IntegerLattice
    occupied: np.ndarray = field(repr=False)  # boolean, indexed like fundamental_domain
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.lattice.dim

    @property
    def tiles(self) -> int:
        return int(self.occupied.sum())

    def cells(self) -> np.ndarray:
        return fundamental_domain(self.lattice)[self.occupied]


def project_kd(L: IntegerLattice, budget: int | None = None) -> TorusPolyomino:
    """K_d restricted to the canonical representatives of Z^d / L."""
    reps = fundamental_domain(L, budget)
    return TorusPolyomino(L, kd_mask(L.dim, reps))


def _neighbour_index(L: IntegerLattice, reps: np.ndarray, axis: int, step: int) -> np.ndarray:
    moved = reps.copy()
    moved[:, axis] += step
    return L.index_of(L.reduce_many(moved))


@dataclass(frozen=True)
class ToricCensus:
    n: int
    holes: int
    b: int
    p_h: int
    connected: bool
    dim: int

    @property
    def identity_ok(self) -> bool:
        return 2 * self.dim * self.n == 2 * self.b + self.p_h

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "holes": self.holes,
            "b": self.b,
            "p_h": self.p_h,
            "connected": self.connected,
            "identity_ok": self.identity_ok,
        }


def toric_census(T: TorusPolyomino) -> ToricCensus:
    """Faces, holes and connectivity under the quotient face adjacency.

    A hole is any face-component of the complement on the torus.
    """
    L = T.lattice
    d = L.dim
    reps = fundamental_domain(L)
    occ = np.asarray(T.occupied, dtype=bool)
    N = len(reps)
    src, dst = [], []
    b = p_h = 0
    for axis in range(d):
        up = _neighbour_index(L, reps, axis, +1)
        down = _neighbour_index(L, reps, axis, -1)
        b += int(np.count_nonzero(occ & occ[up]))
        p_h += int(np.count_nonzero(occ & ~occ[up])) + int(np.count_nonzero(occ & ~occ[down]))
        src.append(np.arange(N))
        dst.append(up)
    src = np.concatenate(src)
    dst = np.concatenate(dst)

    def components(mask: np.ndarray) -> int:
        if not mask.any():
            return 0
        keep = mask[src] & mask[dst]
        graph = coo_matrix((np.ones(int(keep.sum()), dtype=np.int8), (src[keep], dst[keep])), shape=(N, N))
        _, labels = connected_components(graph, directed=False)
        return len(np.unique(labels[mask]))

    n = int(occ.sum())
    return ToricCensus(
        n=n,
        holes=components(~occ),
        b=b,
        p_h=p_h,
        connected=components(occ) == 1,
        dim=d,
    )


def build_optimal_torus(d: int, n_list: Sequence[int], c: int) -> tuple[TorusPolyomino, dict]:
    L = optimal_lattice(d, n_list, c)
    T = project_kd(L)
    T.params = {"n_list": list(n_list), "c": c}
    census = toric_census(T)
    report = {
        "dim": d,
        "n_list": list(n_list),
        "c": c,
        "basis": [list(r) for r in L.basis],
        "det": L.det,
        "tiles": census.n,
        "holes": census.holes,
        "b": census.b,
        "p_h": census.p_h,
        "connected": census.connected,
        "identity_ok": census.identity_ok,
    }
    return T, report


def complement_isolated(T: TorusPolyomino) -> bool:
    """True when every empty cell has all 2d neighbours occupied."""
    L = T.lattice
    reps = fundamental_domain(L)
    occ = np.asarray(T.occupied, dtype=bool)
    ok = np.ones(len(reps), dtype=bool)
    for axis in range(L.dim):
        for step in (1, -1):
            ok &= occ[_neighbour_index(L, reps, axis, step)]
    return bool(np.all(ok[~occ]))


# -- systole ---------------------------------------------------------------------


def _isqrt_ceil(v: int) -> int:
    r = math.isqrt(v)
    return r if r * r == v else r + 1


def shortest_vector(L: IntegerLattice, budget: int | None = None) -> tuple[int, tuple[int, ...]]:
    """Exact squared norm and a witness of a shortest nonzero vector.

    Every lattice point inside the L-infinity box of radius R (the shortest
    generator length, rounded up) is visited by walking the HNF rows from the
    last coordinate to the first; points with partial squared norm above the
    best so far are pruned.
    """
    d = L.dim
    H = L.hnf
    best_sq = min(sum(v * v for v in r) for r in L.basis + H)
    best = min(L.basis + H, key=lambda r: sum(v * v for v in r))
    R = _isqrt_ceil(best_sq)
    check_capacity((2 * R + 1) ** d, "systole search box", budget)
    vec = [0] * d

    def walk(k: int, partial: int) -> None:
        nonlocal best_sq, best
        if k < 0:
            if 0 < partial < best_sq:
                best_sq, best = partial, tuple(vec)
            return
        # x_k = c_k H[k][k] + (already fixed contributions of rows > k)
        base = vec[k]
        h = H[k][k]
        lo = -((R + base) // h)  # ceil((-R - base) / h)
        hi = (R - base) // h
        for ck in range(lo, hi + 1):
            xk = base + ck * h
            sq = partial + xk * xk
            if sq > best_sq:
                continue
            saved = vec[:k]
            for j in range(k):
                vec[j] += ck * H[k][j]
            vec[k] = xk
            walk(k - 1, sq)
            vec[:k] = saved
            vec[k] = base

    walk(d - 1, 0)
    return best_sq, tuple(best)


def systole(L: IntegerLattice, budget: int | None = None) -> float:
    return math.sqrt(shortest_vector(L, budget)[0])


def verify_invariance(d: int, L: IntegerLattice, samples: int = 1000, seed: int = 0, budget: int = 10_000) -> bool:
    """K_d membership is unchanged by every generator of ``L``.

    Random cells are always checked; when det(L) <= budget every coset
    representative is checked too.
    """
    if L.dim != d:
        raise ValueError(f"lattice has dimension {L.dim}, expected {d}")
    rng = np.random.default_rng(seed)
    span = 4 * column_modulus(d) * max(1, max(abs(v) for r in L.basis for v in r))
    pts = [rng.integers(-span, span + 1, size=(samples, d))]
    if L.det <= budget:
        pts.append(fundamental_domain(L))
    pts = np.concatenate(pts)
    base = kd_mask(d, pts)
    for g in L.basis:
        if not np.array_equal(base, kd_mask(d, pts + np.asarray(g, dtype=np.int64))):
            return False
    return True


def _pairwise_coprime(vals: Sequence[int]) -> bool:
    return all(math.gcd(a, b) == 1 for a, b in itertools.combinations(vals, 2))


def search_fat_tori(d: int, max_param: int, limit: int | None = None) -> list[dict]:
    """Scan valid (n_list, c) with every entry <= ``max_param``; rank by normalised systole.

    Purely exploratory: no claim is made that the best entry is optimal.
    """
    column_modulus(d)
    evens = range(2, max_param + 1, 2)
    rest = range(1, max_param + 1)
    odds = range(1, max_param + 1, 2)
    rows = []
    for first in evens:
        for tail in itertools.product(rest, repeat=d - 2):
            n_list = (first, *tail)
            if not _pairwise_coprime(n_list):
                continue
            for c in odds:
                L = optimal_lattice(d, n_list, c)
                sq, _ = shortest_vector(L)
                sys_len = math.sqrt(sq)
                rows.append(
                    {
                        "n_list": list(n_list),
                        "c": c,
                        "det": L.det,
                        "systole_sq": sq,
                        "systole": sys_len,
                        "normalized": sys_len / L.det ** (1 / d),
                    }
                )
    rows.sort(key=lambda r: (-r["normalized"], r["det"], r["n_list"], r["c"]))
    return rows[:limit] if limit else rows
