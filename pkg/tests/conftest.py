import time
from typing import NamedTuple

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


class TimedEstimate(NamedTuple):
    est: object
    elapsed: float


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)


@pytest.fixture(scope="session")
def example1_reg2():
    """Shared n=2 informed per-copy estimate for the named qubit pair (slow)."""
    from qadv import harness, multicopy

    n1, n2 = harness.example1_channels()
    t0 = time.perf_counter()
    est = multicopy.regularized_estimate(n1, n2, 2, "informed")
    return TimedEstimate(est, time.perf_counter() - t0)
