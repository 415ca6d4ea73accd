import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from acceptance_log import RESULTS

# PAW_SEED steers every randomized sweep in the suite.
SEED = int(os.environ.get("PAW_SEED", "7"))


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, ok, detail in RESULTS:
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}: {detail}")
