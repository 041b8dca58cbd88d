import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from strategies import BASE_SEED

settings.register_profile(
    "pcrit", deadline=None, suppress_health_check=[HealthCheck.too_slow], print_blob=True
)
settings.load_profile("pcrit")


@pytest.fixture
def rng():
    return np.random.default_rng(BASE_SEED)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
