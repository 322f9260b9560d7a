import numpy as np
import pytest

from egdss import datasets


@pytest.fixture
def jute10():
    return datasets.load("jute10")


@pytest.fixture
def jute20():
    return datasets.load("jute20")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_report(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def report(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
