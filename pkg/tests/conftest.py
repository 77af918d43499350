import pytest

_LINES_KEY = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion and fail on FAIL."""
    lines = request.config.stash.setdefault(_LINES_KEY, [])

    def record(number: int, label: str, failures: list):
        status = "PASS" if not failures else "FAIL"
        line = f"{status} criterion {number}: {label}"
        if failures:
            line += f" [{len(failures)} failure(s), first: {failures[0]}]"
        print(line)
        lines.append(line)
        assert not failures, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
