import numpy as np
import pytest


def mc_tolerance(estimate, reference, stderr, samples, k=4.0):
    """k standard errors; the reference-based error covers zero-count cells."""
    ref = np.asarray(reference, dtype=float)
    se = np.maximum(np.asarray(stderr, dtype=float), np.sqrt(ref * (1 - ref) / samples))
    return np.abs(np.asarray(estimate) - ref) <= k * se


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
