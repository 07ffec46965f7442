import numpy as np
import pytest

from rpskg.seeds import validate_and_normalize

_ACCEPTANCE_LINES = []


def random_seed(rng: np.random.Generator, shape=(2, 2), floor=0.02):
    """Dirichlet seed with every entry at least ``floor`` before renormalising."""
    raw = rng.dirichlet(np.ones(shape[0] * shape[1])).reshape(shape) + floor
    return validate_and_normalize(raw)


def random_symmetric_seed(rng: np.random.Generator, floor=0.02):
    t1, t2, t3 = rng.dirichlet(np.ones(3)) + floor
    return validate_and_normalize([[t1, t2], [t2, t3]])


@pytest.fixture
def acceptance_report():
    def record(tag: str, passed: bool, detail: str) -> None:
        _ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {tag}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
