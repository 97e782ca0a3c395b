import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=25)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion number -> [title, all passed so far, number of tests run]
_criteria: dict[int, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.skipped:
        return
    if rep.when != "call" and not rep.failed:
        return
    number, title = mark.args
    entry = _criteria.setdefault(number, [title, True, 0])
    entry[1] = entry[1] and rep.passed
    entry[2] += rep.when == "call"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok, runs = _criteria[number]
        terminalreporter.write_line(
            f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title} ({runs} checks)")
