from __future__ import annotations

import time
from contextlib import contextmanager

import pytest

_RESULTS = pytest.StashKey[list]()


class Criterion:
    def __init__(self, number: int, title: str, limit: float | None):
        self.number = number
        self.title = title
        self.limit = limit
        self.detail = ""
        self.elapsed = 0.0

    def line(self, ok: bool) -> str:
        status = "PASS" if ok else "FAIL"
        extra = f"; {self.detail}" if self.detail else ""
        limit = f" (limit {self.limit:g}s)" if self.limit is not None else ""
        return f"criterion {self.number:2d}: {status}  {self.title} [{self.elapsed:.2f}s{limit}]{extra}"


@pytest.fixture
def criterion(request):
    """Context manager that times a criterion, enforces its limit and records one summary line."""
    results = request.config.stash.setdefault(_RESULTS, [])

    @contextmanager
    def run(number: int, title: str, limit: float | None = None):
        c = Criterion(number, title, limit)
        start = time.perf_counter()
        ok = False
        try:
            yield c
            c.elapsed = time.perf_counter() - start
            if c.limit is not None:
                assert c.elapsed < c.limit, f"took {c.elapsed:.2f}s, limit {c.limit}s"
            ok = True
        finally:
            if not c.elapsed:
                c.elapsed = time.perf_counter() - start
            line = c.line(ok)
            results.append((number, line))
            print(line)

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(results):
        terminalreporter.write_line(line)
