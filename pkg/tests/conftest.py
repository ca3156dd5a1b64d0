from __future__ import annotations

import pytest

# criterion number -> (title, failed test names, notes)
_RESULTS: dict[int, tuple[str, list[str], list[str]]] = {}


def _entry(item):
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return None
    number, title = marker.args
    return _RESULTS.setdefault(number, (title, [], []))


@pytest.fixture
def report(request):
    """Attach a measured value to the criterion's summary line."""
    entry = _entry(request.node)

    def add(text: str) -> None:
        if entry is not None:
            entry[2].append(text)

    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    entry = _entry(item)
    if entry is not None and rep.failed:
        entry[1].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, failures, notes = _RESULTS[number]
        status = "FAIL" if failures else "PASS"
        line = f"{status}  AC{number} {title}"
        if notes:
            line += " | " + "; ".join(notes)
        if failures:
            line += " | failing: " + ", ".join(failures)
        terminalreporter.write_line(line)
