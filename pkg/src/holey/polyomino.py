"""Finite cell sets in Z^d: connectivity, holes and the face census.

Cells are unit cubes labelled by their integer centres. Two cells are
adjacent when they share a (d-1)-face, i.e. differ by one unit vector.
The complement is also taken under face adjacency: two closed cubes meeting
only along a lower-dimensional face pinch the complement there, so face
components of the complement are its topological components.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np
from scipy import ndimage


class CellFormatError(ValueError):
    """Malformed cell file; the message carries the offending line number."""


class CellSet:
    """An immutable finite set of cells of Z^d.

    ``coords`` is an ``(n, d)`` int64 array, deduplicated and sorted
    lexicographically with coordinate 1 most significant.
    """

    __slots__ = ("dim", "coords", "__weakref__")

    def __init__(self, cells: Iterable[Sequence[int]] | np.ndarray, dim: int | None = None):
        arr = np.asarray(cells if isinstance(cells, np.ndarray) else list(cells), dtype=np.int64)
        if arr.size == 0:
            if dim is None:
                raise ValueError("dimension required for an empty cell set")
            arr = arr.reshape(0, dim)
        if arr.ndim != 2:
            raise ValueError("cells must be a sequence of coordinate tuples")
        if dim is not None and arr.shape[1] != dim:
            raise ValueError(f"cells have arity {arr.shape[1]}, expected {dim}")
        if len(arr) > 1:
            arr = arr[np.lexsort(arr.T[::-1])]
            keep = np.ones(len(arr), dtype=bool)
            keep[1:] = np.any(arr[1:] != arr[:-1], axis=1)
            arr = arr[keep]
        else:
            arr = arr.copy()
        arr.setflags(write=False)
        self.dim = int(arr.shape[1])
        self.coords = arr

    @classmethod
    def from_grid(cls, grid: np.ndarray, origin: Sequence[int] | None = None) -> "CellSet":
        """Cells at the true entries of a boolean grid whose index 0 sits at ``origin``."""
        d = grid.ndim
        idx = np.argwhere(grid).astype(np.int64)
        if origin is not None:
            idx += np.asarray(origin, dtype=np.int64)
        # argwhere is already row-major lexicographic and duplicate free
        out = cls.__new__(cls)
        idx.setflags(write=False)
        out.dim = d
        out.coords = idx.reshape(-1, d)
        return out

    def __len__(self) -> int:
        return int(self.coords.shape[0])

    @property
    def n(self) -> int:
        return len(self)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for row in self.coords.tolist():
            yield tuple(row)

    def __contains__(self, cell: object) -> bool:
        try:
            c = np.asarray(cell, dtype=np.int64)
        except (TypeError, ValueError):
            return False
        if c.shape != (self.dim,):
            return False
        return bool(np.any(np.all(self.coords == c, axis=1)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CellSet):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash((self.dim, self.coords.tobytes()))

    def __repr__(self) -> str:
        return f"CellSet(dim={self.dim}, n={len(self)})"

    def to_set(self) -> set[tuple[int, ...]]:
        return set(self)

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        """Inclusive (lo, hi) corners; raises on an empty set."""
        if not len(self):
            raise ValueError("empty cell set has no bounding box")
        return self.coords.min(axis=0), self.coords.max(axis=0)

    def translate(self, v: Sequence[int]) -> "CellSet":
        return CellSet(self.coords + np.asarray(v, dtype=np.int64), dim=self.dim)

    def union(self, other: "CellSet") -> "CellSet":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return CellSet(np.vstack([self.coords, other.coords]), dim=self.dim)

    def to_grid(self, pad: int = 1) -> tuple[np.ndarray, np.ndarray]:
        """Dense boolean grid of the bounding box grown by ``pad`` layers, and its origin."""
        lo, hi = self.bbox()
        origin = lo - pad
        shape = tuple(int(s) for s in hi - lo + 1 + 2 * pad)
        grid = np.zeros(shape, dtype=bool)
        grid[tuple((self.coords - origin).T)] = True
        return grid, origin


@lru_cache(maxsize=None)
def face_structure(d: int) -> np.ndarray:
    return ndimage.generate_binary_structure(d, 1)


def is_rook_connected(s: CellSet) -> bool:
    if not len(s):
        return False
    if len(s) == 1:
        return True
    grid, _ = s.to_grid(pad=0)
    _, count = ndimage.label(grid, structure=face_structure(s.dim))
    return count == 1


@dataclass
class _ComplementLabels:
    grid: np.ndarray
    origin: np.ndarray
    labels: np.ndarray
    outer: int
    count: int


def _label_complement(grid: np.ndarray, origin: np.ndarray) -> _ComplementLabels:
    # grid must carry at least one empty layer on every side
    labels, count = ndimage.label(~grid, structure=face_structure(grid.ndim))
    outer = int(labels[(0,) * grid.ndim])
    return _ComplementLabels(grid, origin, labels, outer, int(count))


class HoleReport:
    """Hole count plus lazily materialised hole components."""

    def __init__(self, count: int, labelled: _ComplementLabels | None, dim: int):
        self.count = count
        self._labelled = labelled
        self._dim = dim

    def __repr__(self) -> str:
        return f"HoleReport(count={self.count})"

    @cached_property
    def hole_cells(self) -> list[CellSet]:
        lab = self._labelled
        if lab is None or self.count == 0:
            return []
        flat = lab.labels.ravel()
        order = np.argsort(flat, kind="stable")
        bounds = np.searchsorted(flat[order], np.arange(lab.count + 2))
        comps = []
        for label in range(1, lab.count + 1):
            if label == lab.outer:
                continue
            members = order[bounds[label] : bounds[label + 1]]
            idx = np.stack(np.unravel_index(members, lab.labels.shape), axis=1) + lab.origin
            comps.append(CellSet(idx, dim=self._dim))
        return comps


def holes(s: CellSet) -> HoleReport:
    """Bounded face-components of the complement of ``s``."""
    if not len(s):
        return HoleReport(0, None, s.dim)
    grid, origin = s.to_grid(pad=1)
    lab = _label_complement(grid, origin)
    return HoleReport(lab.count - 1, lab, s.dim)


@dataclass(frozen=True)
class FaceCensus:
    n: int
    b: int
    p_h: int
    p_o: int
    holes: int
    dim: int

    @property
    def identity_ok(self) -> bool:
        return 2 * self.dim * self.n == self.p_o + 2 * self.b + self.p_h

    def as_dict(self) -> dict:
        return {"n": self.n, "holes": self.holes, "b": self.b, "p_h": self.p_h, "p_o": self.p_o}


def _census_from_grid(grid: np.ndarray, origin: np.ndarray) -> FaceCensus:
    d = grid.ndim
    lab = _label_complement(grid, origin)
    outer_empty = lab.labels == lab.outer
    hole_empty = ~outer_empty & ~grid
    b = p_h = p_o = 0
    for axis in range(d):
        lo = [slice(None)] * d
        hi = [slice(None)] * d
        lo[axis] = slice(None, -1)
        hi[axis] = slice(1, None)
        lo, hi = tuple(lo), tuple(hi)
        a, c = grid[lo], grid[hi]
        b += int(np.count_nonzero(a & c))
        p_h += int(np.count_nonzero(a & hole_empty[hi])) + int(np.count_nonzero(c & hole_empty[lo]))
        # outer faces counted directly so the identity is a check, not a definition
        p_o += int(np.count_nonzero(a & outer_empty[hi])) + int(np.count_nonzero(c & outer_empty[lo]))
    n = int(np.count_nonzero(grid))
    return FaceCensus(n=n, b=b, p_h=p_h, p_o=p_o, holes=lab.count - 1, dim=d)


def face_census(s: CellSet) -> FaceCensus:
    """Classify every cube face as interior, hole-bounding or outer."""
    if not len(s):
        return FaceCensus(0, 0, 0, 0, 0, s.dim)
    grid, origin = s.to_grid(pad=1)
    return _census_from_grid(grid, origin)


def face_census_many(sets: Sequence[CellSet], chunk: int = 4096) -> list[FaceCensus]:
    """Face censuses of many small sets from one labelling pass per chunk.

    The sets are laid side by side along axis 0 with an empty slab between
    neighbours, so neither faces nor complement components cross slots.
    """
    out: list[FaceCensus] = []
    for start in range(0, len(sets), chunk):
        out.extend(_census_batch(sets[start : start + chunk]))
    return out


def _census_batch(sets: Sequence[CellSet]) -> list[FaceCensus]:
    if not sets:
        return []
    d = sets[0].dim
    if any(s.dim != d for s in sets):
        raise ValueError("dimension mismatch in batch")
    result: list[FaceCensus | None] = [None] * len(sets)
    live = [k for k, s in enumerate(sets) if len(s)]
    for k, s in enumerate(sets):
        if not len(s):
            result[k] = FaceCensus(0, 0, 0, 0, 0, d)
    if not live:
        return result  # type: ignore[return-value]
    local = [sets[k].coords - sets[k].coords.min(axis=0) for k in live]
    ext = np.array([c.max(axis=0) + 1 for c in local])
    starts = np.concatenate([[1], 1 + np.cumsum(ext[:, 0] + 1)[:-1]])
    shape = [int(starts[-1] + ext[-1, 0] + 1)] + [int(e) + 2 for e in ext[:, 1:].max(axis=0)]
    grid = np.zeros(shape, dtype=bool)
    allc = np.concatenate([c + np.concatenate([[st], np.ones(d - 1, dtype=np.int64)]) for c, st in zip(local, starts)])
    grid[tuple(allc.T)] = True
    slot = np.searchsorted(starts, np.arange(shape[0]), side="right") - 1
    slot = np.clip(slot, 0, len(live) - 1)
    S = len(live)

    labels, count = ndimage.label(~grid, structure=face_structure(d))
    outer = int(labels[(0,) * d])
    outer_empty = labels == outer
    hole_empty = ~outer_empty & ~grid

    def per_slot(mask: np.ndarray, shift: int = 0) -> np.ndarray:
        rows = np.nonzero(mask)[0] + shift
        return np.bincount(slot[rows], minlength=S)

    b = np.zeros(S, dtype=np.int64)
    p_h = np.zeros(S, dtype=np.int64)
    p_o = np.zeros(S, dtype=np.int64)
    for axis in range(d):
        lo = [slice(None)] * d
        hi = [slice(None)] * d
        lo[axis] = slice(None, -1)
        hi[axis] = slice(1, None)
        lo, hi = tuple(lo), tuple(hi)
        a, c = grid[lo], grid[hi]
        # along axis 0 the filled cell of a (lo, hi) pair sits one row later when it is the hi one
        up = 1 if axis == 0 else 0
        b += per_slot(a & c)
        p_h += per_slot(a & hole_empty[hi]) + per_slot(c & hole_empty[lo], up)
        p_o += per_slot(a & outer_empty[hi]) + per_slot(c & outer_empty[lo], up)
    n = per_slot(grid)
    hole_labels = np.ones(count + 1, dtype=bool)
    hole_labels[0] = False
    hole_labels[outer] = False
    member_row = np.full(count + 1, -1, dtype=np.int64)
    flat_rows = np.broadcast_to(np.arange(shape[0]).reshape([-1] + [1] * (d - 1)), shape)
    member_row[labels.ravel()] = flat_rows.ravel()
    h = np.bincount(slot[member_row[hole_labels]], minlength=S)
    for j, k in enumerate(live):
        result[k] = FaceCensus(int(n[j]), int(b[j]), int(p_h[j]), int(p_o[j]), int(h[j]), d)
    return result  # type: ignore[return-value]


def grid_census(grid: np.ndarray) -> FaceCensus:
    """Face census of a dense grid (padded internally)."""
    return _census_from_grid(np.pad(grid, 1), np.zeros(grid.ndim, dtype=np.int64))


# -- cell files ---------------------------------------------------------------


def read_cells(stream: TextIO) -> CellSet:
    dim = None
    rows: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], int] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if dim is None:
            if len(parts) != 2 or parts[0] != "d":
                raise CellFormatError(f"line {lineno}: expected header 'd <dim>', got {raw.strip()!r}")
            try:
                dim = int(parts[1])
            except ValueError:
                raise CellFormatError(f"line {lineno}: bad dimension {parts[1]!r}") from None
            if dim < 1:
                raise CellFormatError(f"line {lineno}: dimension must be positive")
            continue
        if len(parts) != dim:
            raise CellFormatError(f"line {lineno}: expected {dim} integers, got {len(parts)}")
        try:
            cell = tuple(int(p) for p in parts)
        except ValueError:
            raise CellFormatError(f"line {lineno}: non-integer coordinate in {raw.strip()!r}") from None
        if cell in seen:
            raise CellFormatError(f"line {lineno}: duplicate cell {cell} (first on line {seen[cell]})")
        seen[cell] = lineno
        rows.append(cell)
    if dim is None:
        raise CellFormatError("missing header 'd <dim>'")
    return CellSet(rows, dim=dim)


def write_cells(s: CellSet, stream: TextIO, comment: str | None = None) -> None:
    if comment:
        for line in comment.splitlines():
            stream.write(f"# {line}\n")
    stream.write(f"d {s.dim}\n")
    # coords are kept lexicographically sorted
    for row in s.coords.tolist():
        stream.write(" ".join(str(v) for v in row) + "\n")


def load_cells(path: str) -> CellSet:
    with open(path, encoding="utf-8") as fh:
        return read_cells(fh)


def save_cells(s: CellSet, path: str, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write_cells(s, fh, comment)
