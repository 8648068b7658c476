import pytest

# criterion number -> (title, outcome, notes)
_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.fixture
def notes(request):
    """Lines printed under the criterion's PASS/FAIL line."""
    marker = request.node.get_closest_marker("criterion")
    lines: list[str] = []
    if marker:
        _CRITERIA.setdefault(marker.args[0], [marker.args[1], None, []])[2] = lines
    return lines


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    entry = _CRITERIA.setdefault(marker.args[0], [marker.args[1], None, []])
    if report.when == "setup" and report.failed:
        entry[1] = "FAIL"
    elif report.when == "call":
        entry[1] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, outcome, lines = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {outcome or 'NOT RUN'}  {title}")
        for line in lines:
            terminalreporter.write_line(f"    {line}")
