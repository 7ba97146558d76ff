import os
import sys
import tempfile

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
BIN = os.path.join(ROOT, "bin")
if BIN not in sys.path:
    sys.path.insert(0, BIN)

# must be set before config is imported anywhere
os.environ.setdefault("PFR_LOG_DIR", tempfile.mkdtemp(prefix="pfrlab-logs-"))

import pytest  # noqa: E402

from field_core import ProblemParams  # noqa: E402
from functionals import build_S  # noqa: E402


@pytest.fixture(scope="session")
def p2n1():
    return ProblemParams(2, 1, 1)


@pytest.fixture(scope="session")
def p2n2():
    return ProblemParams(2, 2, 1)


@pytest.fixture(scope="session")
def S_p2n2(p2n2):
    return build_S(p2n2)
