import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from remezspan import PointSet

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_set(rng, m, n=1, round_to=None):
    """Distinct uniform points in [-1, 1]^n (optionally snapped to a lattice)."""
    while True:
        pts = rng.uniform(-1, 1, (m, n))
        if round_to:
            pts = np.round(pts / round_to) * round_to
        if len(np.unique(pts, axis=0)) == m:
            return PointSet(pts)


# -- acceptance summary: one line per criterion-marked test ---------------------------------

_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call":
        return
    detail = dict(item.user_properties).get("detail", "")
    item.config.stash.setdefault(_ACCEPTANCE, {})[mark.args[0]] = (
        mark.args[1], report.passed, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        title, ok, detail = results[num]
        line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
