# Test configuration and utilities
import sys
import os

import pytest

# Add the project root to Python path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.engine.decision import setup_decision  # noqa: E402

# ((x1 || x2) && (x3 || x4) && x5), the running five-condition example
FIVE = "(a || b) && (c || d) && e"
THREE_OR = "a || b || c"


@pytest.fixture
def five():
    return setup_decision(FIVE)


@pytest.fixture
def three_or():
    return setup_decision(THREE_OR)


@pytest.fixture
def conj():
    return setup_decision("a && b")


@pytest.fixture
def single():
    return setup_decision("a")


def vec(text):
    """'01001' -> (False, True, False, False, True)"""
    return tuple(ch == "1" for ch in text)
