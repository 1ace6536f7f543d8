import numpy as np
import pytest

from permrelax.qap import QapInstance


@pytest.fixture
def ex1_instance():
    """2x2 matching instance whose relaxed and rounded optima differ."""
    a = np.array([[1.0, 2.0], [3.0, 1.0]])
    b = np.array([[0.0, 2.0], [3.0, 1.0]])
    return QapInstance(a, b)


@pytest.fixture
def ex2_instance():
    """2x2 instance with a loop; the relaxed optimum is the flat matrix."""
    a = np.array([[2.0, 1.0], [1.0, 0.0]])
    b = np.array([[0.0, 1.0], [1.0, 0.0]])
    return QapInstance(a, b)
