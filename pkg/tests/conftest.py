import numpy as np
import pytest

from bsecg.signal import make_rng

# criterion number -> pass flag / measured details, filled by the report hook
_PASSED = {}
_DETAILS = {}


@pytest.fixture
def rng():
    return make_rng(12345)


def pytest_configure(config):
    np.set_printoptions(precision=6, suppress=True)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.skipped:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        n = mark.args[0]
        _PASSED[n] = rep.passed and _PASSED.get(n, True)
        detail = dict(item.user_properties).get("detail")
        if detail:
            _DETAILS.setdefault(n, []).append(detail)


def pytest_terminal_summary(terminalreporter):
    if not _PASSED:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_PASSED):
        line = f"criterion {n}: {'PASS' if _PASSED[n] else 'FAIL'}"
        if n in _DETAILS:
            line += "  [" + "; ".join(_DETAILS[n]) + "]"
        terminalreporter.write_line(line)
