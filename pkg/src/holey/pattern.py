"""The infinite sponge K_d inside Z^d.

K_d holds every even cell (coordinate sum even) plus every full column along
the last axis standing on the lifted (d-1)-dimensional Lee code, whose
modulus is q = 2d - 1.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from . import lee_code


def column_modulus(d: int) -> int:
    if d < 2:
        raise ValueError(f"K_d needs d >= 2, got {d}")
    return 2 * d - 1


def is_column(d: int, x: Sequence[int]) -> bool:
    column_modulus(d)
    return lee_code.lift_contains(d - 1, list(x)[: d - 1])


def kd_contains(d: int, x: Sequence[int]) -> bool:
    column_modulus(d)
    if len(x) != d:
        raise ValueError(f"expected {d} coordinates, got {len(x)}")
    if sum(int(v) for v in x) % 2 == 0:
        return True
    return lee_code.lift_contains(d - 1, [int(v) for v in x[: d - 1]])


def kd_mask(d: int, coords) -> np.ndarray:
    """Vectorised :func:`kd_contains` over rows of an ``(..., d)`` array."""
    column_modulus(d)
    arr = np.asarray(coords, dtype=np.int64)
    even = arr.sum(axis=-1) % 2 == 0
    return even | lee_code.lift_mask(d - 1, arr[..., : d - 1])


def kd_grid(d: int, origin: Sequence[int], shape: Sequence[int]) -> np.ndarray:
    """Dense boolean K_d indicator for the box ``origin + [0, shape)``.

    Built by broadcasting 1-d coordinate vectors, so memory stays at one
    boolean per cell even in high dimension.
    """
    q = column_modulus(d)
    parity = np.zeros((1,) * d, dtype=np.int64)
    code = np.zeros((1,) * d, dtype=np.int64)
    for axis in range(d):
        view = [1] * d
        view[axis] = shape[axis]
        coord = (np.arange(shape[axis], dtype=np.int64) + origin[axis]).reshape(view)
        parity = parity + coord
        if axis < d - 1:
            code = code + (axis + 1) * coord
    parity = np.broadcast_to(parity % 2 == 0, tuple(shape))
    columns = np.broadcast_to(code % q == 0, tuple(shape))
    return parity | columns


def box_census(d: int, anchor: Sequence[int]) -> int:
    """Count K_d cells in the q x 1 x ... x 1 x 2 box whose lowest corner is ``anchor``."""
    q = column_modulus(d)
    shape = [1] * d
    shape[0] = q
    shape[-1] = 2
    return int(kd_grid(d, anchor, shape).sum())


def density(d: int) -> tuple[int, int]:
    """Density of K_d as a (numerator, denominator) pair: d / (2d - 1)."""
    return d, column_modulus(d)


def sample(d: int, lo: Sequence[int], hi: Sequence[int]) -> list[tuple[int, ...]]:
    """K_d cells in the closed window ``lo <= x <= hi`` in lexicographic order."""
    column_modulus(d)
    if len(lo) != d or len(hi) != d:
        raise ValueError(f"window corners need {d} coordinates")
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    return [x for x in itertools.product(*ranges) if kd_contains(d, x)]
