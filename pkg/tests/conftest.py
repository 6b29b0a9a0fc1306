import numpy as np
import pytest

from mdhtest import ReturnSeries


def make_series(values, frequency="daily", start="2000-01-03"):
    values = np.asarray(values, dtype=np.float64)
    step = 1 if frequency == "daily" else 7
    dates = np.datetime64(start, "D") + np.arange(len(values)) * step
    return ReturnSeries(values=values, dates=dates, frequency=frequency)


@pytest.fixture
def mk():
    return make_series
