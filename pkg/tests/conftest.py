import os
import sys
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from weakor import matroid as M
from weakor.enumeration import enumerate_small

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@lru_cache(maxsize=None)
def small_matroids(max_n=5):
    out = []
    for n in range(max_n + 1):
        for r in range(n + 1):
            out.extend(enumerate_small(n, r))
    return tuple(out)


def matroids(max_n=5):
    """Strategy over all labeled matroids with at most ``max_n`` elements."""
    return st.sampled_from(small_matroids(max_n))


@pytest.fixture(scope="session")
def fano():
    return M.fano()


@pytest.fixture(scope="session")
def u24():
    return M.uniform(2, 4)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
