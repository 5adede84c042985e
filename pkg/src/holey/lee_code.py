"""Perfect single-error-correcting Lee codes on (Z/qZ)^d with q = 2d + 1.

The code words are the points ``a`` with ``sum(i * a_i) == 0 (mod q)``.
Jacks (Lee balls of radius one) centred on the words tile the torus, and the
periodic lift of the code tiles Z^d the same way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._budget import CapacityError

MAX_EXHAUSTIVE_DIM = 5


def modulus(d: int) -> int:
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return 2 * d + 1


def _weights(d: int) -> np.ndarray:
    return np.arange(1, d + 1, dtype=np.int64)


@dataclass(frozen=True)
class LeeCode:
    dim: int
    modulus: int
    words: frozenset[tuple[int, ...]]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, point: object) -> bool:
        return point in self.words

    def jack(self, word: Sequence[int]) -> list[tuple[int, ...]]:
        """The word together with its 2d Lee neighbours, reduced mod q."""
        return jack(self.dim, word)


def code_words(d: int) -> LeeCode:
    q = modulus(d)
    pts = np.array(list(itertools.product(range(q), repeat=d)), dtype=np.int64).reshape(-1, d)
    keep = (pts @ _weights(d)) % q == 0
    words = frozenset(tuple(int(v) for v in row) for row in pts[keep])
    return LeeCode(dim=d, modulus=q, words=words)


def is_code_word(d: int, p: Sequence[int]) -> bool:
    q = modulus(d)
    if len(p) != d:
        raise ValueError(f"expected {d} coordinates, got {len(p)}")
    return sum((i + 1) * int(a) for i, a in enumerate(p)) % q == 0


def jack(d: int, center: Sequence[int]) -> list[tuple[int, ...]]:
    q = modulus(d)
    c = [int(v) % q for v in center]
    cells = [tuple(c)]
    for axis in range(d):
        for step in (-1, 1):
            nb = list(c)
            nb[axis] = (nb[axis] + step) % q
            cells.append(tuple(nb))
    return cells


def verify_perfect(d: int) -> dict:
    """Exhaustively check that jacks on the code words partition (Z/qZ)^d.

    Returns ``{"covered_once", "jack_count", "cell_count"}``. Raises
    :class:`CapacityError` above dimension 5.
    """
    if d > MAX_EXHAUSTIVE_DIM:
        raise CapacityError(f"exhaustive check limited to d <= {MAX_EXHAUSTIVE_DIM}, got d={d}")
    q = modulus(d)
    code = code_words(d)
    cover = np.zeros((q,) * d, dtype=np.int64)
    words = np.array(sorted(code.words), dtype=np.int64).reshape(-1, d)
    np.add.at(cover, tuple(words.T), 1)
    for axis in range(d):
        for step in (-1, 1):
            shifted = words.copy()
            shifted[:, axis] = (shifted[:, axis] + step) % q
            np.add.at(cover, tuple(shifted.T), 1)
    return {
        "covered_once": bool(np.all(cover == 1)),
        "jack_count": len(code),
        "cell_count": int(cover.size),
    }


def row_property(d: int) -> bool:
    """Every line along axis 1 of (Z/qZ)^d holds exactly one code word."""
    if d > MAX_EXHAUSTIVE_DIM:
        raise CapacityError(f"exhaustive check limited to d <= {MAX_EXHAUSTIVE_DIM}, got d={d}")
    q = modulus(d)
    for rest in itertools.product(range(q), repeat=d - 1):
        hits = sum(is_code_word(d, (a1, *rest)) for a1 in range(q))
        if hits != 1:
            return False
    return True


def lift_contains(d: int, x: Sequence[int]) -> bool:
    """Membership in the periodic lift of the code to Z^d."""
    if len(x) != d:
        raise ValueError(f"expected {d} coordinates, got {len(x)}")
    return is_code_word(d, [int(v) % modulus(d) for v in x])


def lift_mask(d: int, coords: np.ndarray | Iterable[Sequence[int]]) -> np.ndarray:
    """Vectorised :func:`lift_contains` over rows of an ``(..., d)`` array."""
    arr = np.asarray(coords, dtype=np.int64)
    if arr.shape[-1] != d:
        raise ValueError(f"expected trailing dimension {d}, got {arr.shape[-1]}")
    return (arr @ _weights(d)) % modulus(d) == 0
