import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pspin_ftc.spin import build_spin_algebra

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def algebra_cache():
    cache = {}

    def get(N):
        if N not in cache:
            cache[N] = build_spin_algebra(N)
        return cache[N]

    return get


def comm(a, b):
    return a @ b - b @ a


def max_abs(a):
    return float(np.max(np.abs(a)))


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Collects one verdict line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number, passed, detail, elapsed):
        verdict = "PASS" if passed else "FAIL"
        line = f"[{verdict}] criterion {number:>2}: {detail} ({elapsed:.1f} s)"
        lines.append((number, line))
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
