import pytest

from kacwalk.rng import RngStream

_CRITERIA = []


def record_criterion(label: str, ok: bool, detail: str):
    line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
    _CRITERIA.append(line)
    print(line)
    return ok


@pytest.fixture
def report():
    return record_criterion


@pytest.fixture
def stream():
    return RngStream(20240607)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
