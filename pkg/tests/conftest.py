import numpy as np
import pytest

from liesys.numerics import TimeGrid
from liesys.weinorman import ControlSignal


def smooth_controls(n_channels, amp=1.0, seed=0):
    """Deterministic smooth control draws used across the suite."""
    rng = np.random.default_rng(seed)
    co = rng.uniform(-amp, amp, (n_channels, 3))
    fr = rng.uniform(0.5, 2.0, (n_channels, 2))
    return ControlSignal([
        (lambda t, c=co[i], f=fr[i]:
         c[0] + c[1] * np.sin(2 * np.pi * f[0] * t) + c[2] * np.cos(2 * np.pi * f[1] * t))
        for i in range(n_channels)])


@pytest.fixture
def unit_grid():
    return TimeGrid.uniform(0.0, 1.0, 2000)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
