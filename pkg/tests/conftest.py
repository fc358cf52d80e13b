import numpy as np
import pytest

from multspec.symbols import FourierCoeffTable


def exact_table(entries, radius):
    """Exact one-level table ``{j: f_j}`` zero-padded to ``radius``."""
    return FourierCoeffTable.from_dict(entries).with_radius((radius,))


def pi_cos_table(radius):
    return exact_table({0: 0.0, 1: np.pi / 2, -1: np.pi / 2}, radius)


def shift_table(radius):
    return exact_table({0: 0j, 1: 1.0 + 0j, -1: 0j}, radius)


def two_minus_two_cos(radius, power=1):
    base = np.array([-1.0, 2.0, -1.0])
    c = np.array([1.0])
    for _ in range(power):
        c = np.convolve(c, base)
    r = (len(c) - 1) // 2
    return exact_table({j: c[j + r] for j in range(-r, r + 1)}, radius)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when == "call" and "test_acceptance.py::test_criterion_" in rep.nodeid:
                name = rep.nodeid.split("::")[-1]
                lines.append(f"criterion {name[15:17]} {'PASS' if key == 'passed' else 'FAIL'}: {name[18:]}")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
