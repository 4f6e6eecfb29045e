import numpy as np
import pytest

from pdwasser import PersistenceDiagram

_ACCEPTANCE_KEY = pytest.StashKey[list]()


def random_diagram(rng, k, integer=False):
    """``k`` random points; ``integer=True`` gives small-integer coordinates full of ties."""
    if integer:
        births = rng.integers(0, 4, size=k).astype(float)
        deaths = births + rng.integers(1, 4, size=k)
    else:
        births = rng.uniform(-3.0, 3.0, size=k)
        deaths = births + rng.uniform(0.05, 4.0, size=k)
    return PersistenceDiagram(np.column_stack([births, deaths]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def record_criterion(request):
    """Acceptance tests call this with (number, passed, detail); lines are printed in the summary."""
    lines = request.config.stash[_ACCEPTANCE_KEY]

    def record(number, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
        print(line)
        lines.append(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
