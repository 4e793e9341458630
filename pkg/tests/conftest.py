import numpy as np
import pytest

from shamap import kernels

# criterion number -> (description, [(test name, passed)])
CRITERIA = {}


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        number, text = marker.args
        CRITERIA.setdefault(number, (text, []))[1].append((item.name, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        text, results = CRITERIA[number]
        failed = [name for name, ok in results if not ok]
        status = "FAIL" if failed else "PASS"
        line = f"[{status}] criterion {number:>2}: {text}"
        if failed:
            line += f"  (failing checks: {', '.join(failed)})"
        terminalreporter.write_line(line)
