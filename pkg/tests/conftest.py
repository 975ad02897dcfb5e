import sys
from pathlib import Path

import numpy as np
import pytest

_root = str(Path(__file__).resolve().parent.parent)
if _root not in sys.path:
    sys.path.insert(0, _root)

from models.architecture import CouplingMap, builtin_qx4  # noqa: E402
from models.qasm_parser import load_qasm_file  # noqa: E402
from tests.helpers import RUNNING_EXAMPLE  # noqa: E402


@pytest.fixture
def qx4():
    return builtin_qx4()


@pytest.fixture
def line3():
    return CouplingMap("line3", 3, frozenset({(0, 1), (1, 2)}))


@pytest.fixture
def running_example():
    return load_qasm_file(RUNNING_EXAMPLE)


@pytest.fixture
def rng():
    return np.random.default_rng(20190125)
