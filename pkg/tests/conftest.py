import pytest

_OUTCOMES: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None and (report.when == "call" or report.failed):
        number, title = mark.args
        note = getattr(item, "criterion_note", "")
        if number not in _OUTCOMES or report.failed:
            _OUTCOMES[number] = ("pass" if report.passed else "FAIL", title, note)
    return report


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        verdict, title, note = _OUTCOMES[number]
        line = f"criterion {number:2d}: {verdict:4s}  {title}"
        terminalreporter.write_line(line + (f"  ({note})" if note else ""))
