import time
from contextlib import contextmanager

import pytest


@contextmanager
def criterion(number: int, name: str, time_limit: float):
    """Time one acceptance criterion and print a single pass/fail line."""
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        elapsed = time.perf_counter() - start
        print(f"[acceptance] C{number} {name}: FAIL ({elapsed:.1f}s)")
        raise
    elapsed = time.perf_counter() - start
    print(f"[acceptance] C{number} {name}: PASS ({elapsed:.1f}s, limit {time_limit:.0f}s)")
    assert elapsed < time_limit, f"criterion {number} exceeded {time_limit}s ({elapsed:.1f}s)"


@pytest.fixture
def acceptance():
    return criterion
