"""Upper and lower bounds on the maximal hole count f_d(n), and an exact oracle.

The upper bound is the implicit inequality

    2d h <= 2d n - 2(n - 1) - 2d (n + h)^((d-1)/d)

(interior faces of a connected set number at least n - 1, and the outer
perimeter is at least that of a cube of volume n + h). It is evaluated in
exact integer arithmetic by raising both sides to the d-th power.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterator

from ._budget import CapacityError
from .builder import build_for_n

DEFAULT_MAX_N = {2: 12, 3: 8, 4: 6}


def _implicit_ok(d: int, n: int, h: int) -> bool:
    rhs = 2 * d * n - 2 * (n - 1) - 2 * d * h
    if rhs < 0:
        return False
    # 2d (n+h)^((d-1)/d) <= rhs  <=>  (2d)^d (n+h)^(d-1) <= rhs^d
    return (2 * d) ** d * (n + h) ** (d - 1) <= rhs**d


def upper_bound(d: int, n: int) -> int:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    lo, hi = 0, n * (d - 1)
    if not _implicit_ok(d, n, 0):
        return 0
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _implicit_ok(d, n, mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def displayed_upper_bound(d: int, n: int) -> float:
    """The simplified closed form (d-1)/d n - n^((d-1)/d), which omits a +1/d."""
    return (d - 1) / d * n - n ** ((d - 1) / d)


def displayed_upper_floor(d: int, n: int) -> int:
    """Exact floor of :func:`displayed_upper_bound` (may be negative)."""
    # k <= (d-1)n/d - n^((d-1)/d)  <=>  d^d n^(d-1) <= ((d-1) n - d k)^d with (d-1) n - d k >= 0
    k = ((d - 1) * n) // d
    while True:
        base = (d - 1) * n - d * k
        if base >= 0 and d**d * n ** (d - 1) <= base**d:
            return k
        k -= 1


def toric_upper_bound(d: int, n: int) -> int:
    """floor(((d-1) n + 1) / d): no outer perimeter, at least n - 1 interior faces."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return ((d - 1) * n + 1) // d


def lower_bound(d: int, n: int) -> int:
    """Hole count of an explicit n-cell witness."""
    return build_for_n(d, n).ensure_census().holes


def lower_display(d: int, n: int) -> float:
    """(d-1)/d n - 4(d-1) n^((d-1)/d), the constructive bound without its O-term."""
    return (d - 1) / d * n - 4 * (d - 1) * n ** ((d - 1) / d)


def fitted_constant(d: int, ns) -> float:
    """Smallest C with lower_bound >= lower_display - C n^((d-2)/d) over ``ns``."""
    worst = -math.inf
    for n in ns:
        gap = lower_display(d, n) - lower_bound(d, n)
        worst = max(worst, gap / n ** ((d - 2) / d))
    return max(worst, 0.0)


# -- exhaustive enumeration -------------------------------------------------------


class _Lattice:
    """Integer encoding of the cells reachable by an n-cell animal rooted at 0.

    Coordinate 1 gets the largest stride, so integer order is lexicographic
    order and "cell >= root" is the usual Redelmeier admissibility test.
    """

    def __init__(self, d: int, n: int):
        self.d = d
        self.n = n
        self.width = w = 2 * n + 1
        self.strides = [w ** (d - 1 - k) for k in range(d)]
        self.offset = [0] + [n] * (d - 1)
        self.root = sum(o * s for o, s in zip(self.offset, self.strides))
        self.steps = [s for st in self.strides for s in (st, -st)]

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for st, off in zip(self.strides, self.offset):
            v, code = divmod(code, st)
            out.append(v - off)
        return tuple(out)

    def decode_all(self, codes) -> list[tuple[int, ...]]:
        return [self.decode(c) for c in codes]


def _grow(lat: _Lattice, poly: list[int], untried: list[int], seen: set[int], visit: Callable) -> None:
    n, root, steps = lat.n, lat.root, lat.steps
    untried = list(untried)
    while untried:
        cell = untried.pop()
        poly.append(cell)
        if len(poly) == n:
            visit(poly)
        else:
            fresh = []
            for st in steps:
                nb = cell + st
                if nb >= root and nb not in seen:
                    fresh.append(nb)
            seen.update(fresh)
            _grow(lat, poly, untried + fresh, seen, visit)
            seen.difference_update(fresh)
        poly.pop()


def _work_units(lat: _Lattice) -> list[tuple[list[int], list[int], set[int]]]:
    """Search states after the first two placements (or the whole tree for n <= 2)."""
    root = lat.root
    seen = {root}
    units = []
    start = [root + st for st in lat.steps if root + st >= root]
    seen.update(start)
    untried = list(start)
    while untried:
        cell = untried.pop()
        fresh = [cell + st for st in lat.steps if cell + st >= root and cell + st not in seen]
        units.append(([root, cell], untried + fresh, seen | set(fresh)))
    return units


def iter_fixed(d: int, n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All fixed d-dimensional n-cell animals, each once, lexicographic minimum at the origin."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    lat = _Lattice(d, n)
    if n == 1:
        yield (lat.decode(lat.root),)
        return
    found: list[tuple] = []

    def visit(poly):
        found.append(tuple(lat.decode_all(poly)))

    for poly, untried, seen in _work_units(lat):
        if n == 2:
            found.append(tuple(lat.decode_all(poly)))
        else:
            _grow(lat, poly, untried, seen, visit)
        yield from found
        found.clear()


class _HoleCounter:
    """Counts bounded complement components of an encoded animal by flood fill."""

    def __init__(self, lat: _Lattice):
        self.lat = lat

    def __call__(self, poly: list[int]) -> int:
        lat = self.lat
        d = lat.d
        cells = [lat.decode(c) for c in poly]
        lo = [min(c[k] for c in cells) for k in range(d)]
        hi = [max(c[k] for c in cells) for k in range(d)]
        # a hole cell needs filled cells on both sides along every axis
        if any(h - l < 2 for l, h in zip(lo, hi)):
            return 0
        shape = [h - l + 3 for l, h in zip(lo, hi)]
        strides = [1] * d
        for k in range(d - 2, -1, -1):
            strides[k] = strides[k + 1] * shape[k + 1]
        size = strides[0] * shape[0]
        filled = bytearray(size)
        for c in cells:
            filled[sum((c[k] - lo[k] + 1) * strides[k] for k in range(d))] = 1
        seen = bytearray(filled)
        components = 0
        for start in range(size):
            if seen[start]:
                continue
            components += 1
            seen[start] = 1
            stack = [start]
            while stack:
                cur = stack.pop()
                rem = cur
                for k in range(d):
                    coord, rem = divmod(rem, strides[k])
                    if coord > 0 and not seen[cur - strides[k]]:
                        seen[cur - strides[k]] = 1
                        stack.append(cur - strides[k])
                    if coord < shape[k] - 1 and not seen[cur + strides[k]]:
                        seen[cur + strides[k]] = 1
                        stack.append(cur + strides[k])
        # index 0 lies in the padding, so the first component found is the outside
        return components - 1


@dataclass
class _Best:
    holes: int = 0
    count: int = 0
    witness: tuple | None = None


def _search_unit(args) -> tuple[int, int, tuple | None]:
    d, n, poly, untried, seen = args
    lat = _Lattice(d, n)
    counter = _HoleCounter(lat)
    best = _Best()

    def visit(p):
        best.count += 1
        h = counter(p)
        if h > best.holes or best.witness is None:
            best.holes = max(best.holes, h)
            best.witness = tuple(lat.decode_all(p))

    if len(poly) == n:
        visit(poly)
    else:
        _grow(lat, list(poly), untried, set(seen), visit)
    return best.holes, best.count, best.witness


def brute_force(d: int, n: int, jobs: int = 1, max_n: int | None = None) -> dict:
    """Exhaustive maximum hole count over fixed n-cell animals.

    Returns ``{"d", "n", "max_holes", "count", "witness"}`` where ``count`` is
    the number of fixed animals visited. The search tree is split after two
    placements and the parts are reduced by maximum.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    limit = DEFAULT_MAX_N.get(d, 4) if max_n is None else max_n
    if n > limit:
        raise CapacityError(f"brute force for d={d} limited to n <= {limit}, got n={n}")
    lat = _Lattice(d, n)
    if n == 1:
        return {"d": d, "n": 1, "max_holes": 0, "count": 1, "witness": [lat.decode(lat.root)]}
    units = [(d, n, poly, untried, seen) for poly, untried, seen in _work_units(lat)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_search_unit, units))
    else:
        results = [_search_unit(u) for u in units]
    best_holes, total, witness = -1, 0, None
    for holes, count, wit in results:
        total += count
        if wit is not None and holes > best_holes:
            best_holes, witness = holes, wit
    return {"d": d, "n": n, "max_holes": best_holes, "count": total, "witness": [list(c) for c in witness]}


def brute_force_max_holes(d: int, n: int, jobs: int = 1, max_n: int | None = None) -> int:
    return brute_force(d, n, jobs=jobs, max_n=max_n)["max_holes"]


@dataclass
class BoundReport:
    d: int
    n: int
    lower: int
    upper: int
    exact: int | None = None
    displayed_upper: int | None = None
    displayed_upper_violated: bool | None = None

    def consistent(self) -> bool:
        if self.exact is None:
            return self.lower <= self.upper
        return self.lower <= self.exact <= self.upper

    def as_dict(self) -> dict:
        return asdict(self)


def bound_report(d: int, n: int, exact: bool = False, jobs: int = 1, max_n: int | None = None) -> BoundReport:
    rep = BoundReport(d=d, n=n, lower=lower_bound(d, n), upper=upper_bound(d, n))
    rep.displayed_upper = displayed_upper_floor(d, n)
    if exact:
        rep.exact = brute_force_max_holes(d, n, jobs=jobs, max_n=max_n)
    best_known = rep.exact if rep.exact is not None else rep.lower
    rep.displayed_upper_violated = best_known > rep.displayed_upper
    return rep
