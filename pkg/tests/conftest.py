import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qlogic.contexts import ContextPoset, context_from_commuting

settings.register_profile("qlogic", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qlogic")

SZ = np.diag([1.0, -1.0]).astype(complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PZ = np.diag([1.0, 0.0]).astype(complex)
PX = np.full((2, 2), 0.5, dtype=complex)


@pytest.fixture
def cz():
    return context_from_commuting([SZ], label="Cz")


@pytest.fixture
def cx():
    return context_from_commuting([SX], label="Cx")


@pytest.fixture
def zx(cz, cx):
    """The poset {C1, Cz, Cx} of M_2."""
    return ContextPoset.build([cz, cx], down_close=True)


@pytest.fixture
def zx_nobottom(cz, cx):
    return ContextPoset.build([cz, cx], down_close=True, include_bottom=False)
