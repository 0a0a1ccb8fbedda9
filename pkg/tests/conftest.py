import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import qubit_schwarz as qs

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_hermitian(rng, n=3, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (a + a.conj().T)


def random_general(rng, scale=1.0):
    return qs.build_general(random_hermitian(rng, scale=0.5 * scale), scale * rng.normal(size=3))


def same_multiset(a, b, atol):
    """Greedy nearest matching of two small eigenvalue lists."""
    rest = list(np.asarray(b, dtype=complex))
    for x in np.asarray(a, dtype=complex):
        k = int(np.argmin([abs(x - y) for y in rest]))
        if abs(x - rest[k]) > atol:
            return False
        rest.pop(k)
    return not rest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
