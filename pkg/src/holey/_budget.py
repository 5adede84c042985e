"""Capacity limits shared by the builders, the torus code and the CLI."""

from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Iterator

DEFAULT_CELL_BUDGET = 20_000_000
ENV_VAR = "HOLEY_CELL_BUDGET"


class CapacityError(RuntimeError):
    """Raised when a request would exceed the configured cell budget."""


_override: int | None = None


@contextmanager
def budget_override(value: int | None) -> Iterator[None]:
    """Temporarily replace the budget (takes precedence over the environment)."""
    global _override
    if value is not None and value < 1:
        raise ValueError(f"budget must be positive, got {value}")
    saved, _override = _override, value
    try:
        yield
    finally:
        _override = saved


def cell_budget() -> int:
    if _override is not None:
        return _override
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_CELL_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{ENV_VAR} must be positive, got {value}")
    return value


def check_capacity(count: int, what: str, budget: int | None = None) -> None:
    limit = cell_budget() if budget is None else budget
    if count > limit:
        raise CapacityError(f"{what}: {count} cells exceeds budget {limit} (set {ENV_VAR} to raise it)")
