import pytest

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        detail = dict(item.user_properties).get("detail", "")
        if report.skipped:
            status = "SKIP"
            if not detail and isinstance(report.longrepr, tuple):
                detail = report.longrepr[2]
        else:
            status = "PASS" if report.passed else "FAIL"
            if report.failed and not detail:
                detail = report.longrepr.reprcrash.message if hasattr(report.longrepr, "reprcrash") else ""
        _CRITERIA[number] = (title, status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status, detail = _CRITERIA[number]
        line = f"criterion {number}: {status:<4} {title}"
        if detail:
            line += f" | {detail}"
        terminalreporter.write_line(line)
