import numpy as np
import pytest

from pairslit import PhysicalParams, SpinStatistics


@pytest.fixture(scope="session")
def p_fast():
    """Baseline geometry, fast longitudinal speed (packets barely spread)."""
    return PhysicalParams.baseline(x_speed=2.0e7)


@pytest.fixture(scope="session")
def p_slow():
    """Baseline geometry, slow longitudinal speed (packets spread strongly)."""
    return PhysicalParams.baseline(x_speed=2.0e6)


@pytest.fixture(params=list(SpinStatistics), ids=lambda s: s.value)
def stats(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
