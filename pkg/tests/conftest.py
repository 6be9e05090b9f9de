import pytest

import repapprox as ra

_ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def ramanujan():
    return ra.parse_polynomial("c:1,1,-2,-1")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or not item.name.startswith("test_criterion"):
        return
    status = "PASS" if report.passed else "FAIL"
    if hasattr(report, "wasxfail"):
        status = "XFAIL (documented source-table defect)"
    doc = (item.function.__doc__ or "").strip().splitlines()
    label = doc[0] if doc else item.name
    _ACCEPTANCE_RESULTS.append((item.name, status, label))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, status, label in sorted(_ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{status:<6} {name}: {label}")
