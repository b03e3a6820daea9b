import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CRITERIA = {
    1: "Heisenberg smoke test",
    2: "finite-type sandwich dimensions",
    3: "affine-type sandwich structure",
    4: "brute-force oracle equivalence",
    5: "two-generator parameter law",
    6: "X-fullness for finite and affine diagrams",
    7: "generic isomorphism certificates",
    8: "product-identity dichotomy on the 4-cycle",
    9: "property suites",
    10: "character rank cases",
}

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    n = getattr(report, "criterion", None)
    if n is None:
        return
    prev = _results.get(n, True)
    _results[n] = prev and report.passed


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = m.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n in _results:
            status = "PASS" if _results[n] else "FAIL"
            terminalreporter.write_line(f"criterion {n:2d} [{status}] {CRITERIA[n]}")
