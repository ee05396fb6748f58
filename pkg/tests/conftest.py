from __future__ import annotations

import pytest

# criterion number -> (title, outcome); filled by the report hook below
_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    entry = _CRITERIA.setdefault(num, [title, "PASS", ""])
    if call.excinfo is not None and call.when in ("setup", "call"):
        entry[1] = "FAIL"
        entry[2] = call.excinfo.exconly().splitlines()[0][:160]
    elif call.when == "call":
        detail = getattr(item, "acceptance_detail", "")
        if detail:
            entry[2] = detail


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, outcome, detail = _CRITERIA[num]
        line = f"criterion {num:2d} {outcome}: {title}"
        if detail:
            line += f" [{detail}]"
        terminalreporter.write_line(line)


@pytest.fixture
def note(request):
    """Attach a short detail string to the acceptance line of this test."""
    def _note(text: str):
        request.node.acceptance_detail = text
    return _note
