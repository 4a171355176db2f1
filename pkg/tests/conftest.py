import os
import random

import pytest
from hypothesis import HealthCheck, settings

SEED = int(os.environ.get("FOLRES_SEED", "20250117"))

settings.register_profile(
    "folres",
    derandomize="FOLRES_SEED" not in os.environ,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("folres")


@pytest.fixture
def rng():
    return random.Random(SEED)


def pytest_configure(config):
    # route FOLRES_SEED into hypothesis as well
    if "FOLRES_SEED" in os.environ and hasattr(config.option, "hypothesis_seed"):
        config.option.hypothesis_seed = SEED


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
