import itertools
import math

import numpy as np
import pytest

from gaussrelax import core, dynamics


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def theta_bruteforce(nus, k):
    """Sum over all k-subsets of prod nu_j^2, straight from the definition."""
    sq = [float(v) ** 2 for v in nus]
    return math.fsum(math.prod(c) for c in itertools.combinations(sq, k))


def centered_difference(f, sigma, chi, h=1e-6):
    """Derivative of f along the exact flow, evaluated at t = h so both sides exist."""
    plus = f(dynamics.evolve(sigma, chi, 2 * h))
    minus = f(sigma)
    return (plus - minus) / (2 * h), dynamics.evolve(sigma, chi, h)


def random_state(rng, n, nu_max=3.0, z_max=3.0):
    return core.random_covariance(n, rng, nu_max=nu_max, z_max=z_max)


_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
