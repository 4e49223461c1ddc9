import pytest

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, summary): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    number = getattr(report, "criterion_number", None)
    if number is None:
        return
    entry = _CRITERIA.setdefault(number, {"summary": report.criterion_summary, "ok": True})
    entry["ok"] = entry["ok"] and report.outcome == "passed"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        report.criterion_number, report.criterion_summary = marker.args


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} [PRIMARY] {status}  {entry['summary']}")
