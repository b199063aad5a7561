import pytest

from rackforge.caps import set_caps


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true", default=False, help="run long computations")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="needs --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(autouse=True)
def _reset_caps():
    set_caps(None)
    yield
    set_caps(None)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: numbered acceptance criterion")
    config._acceptance_lines = {}


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion."""

    def record(number: int, title: str, failures: list[str]) -> None:
        status = "PASS" if not failures else "FAIL"
        line = f"criterion {number} [{status}] {title}"
        if failures:
            line += ": " + "; ".join(failures)
        request.config._acceptance_lines[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_lines", {})
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
