import math

import numpy as np
import pytest

from latsent.optimize import NumericalDomainError, golden_section, grid_then_golden


def test_golden_quadratic():
    m = golden_section(lambda x: (x - 0.3) ** 2, -2, 2, tol=1e-10)
    assert m.x == pytest.approx(0.3, abs=1e-9)
    assert m.evaluations > 2


def test_grid_finds_global_basin():
    # two basins, the deeper one on the negative side
    f = lambda x: np.cos(3 * x) + 0.1 * (x + 1.1) ** 2  # noqa: E731
    m = grid_then_golden(lambda x: float(f(x)), f, half_width=4, step=0.05)
    xs = np.linspace(-4, 4, 400_001)
    assert m.fx <= f(xs).min() + 1e-9


def test_grid_boundary_minimum():
    f = lambda x: np.asarray(x) * 1.0  # noqa: E731
    m = grid_then_golden(lambda x: float(f(x)), f, half_width=8, step=0.05)
    assert m.x == pytest.approx(-8.0, abs=1e-8)


def test_never_worse_than_grid():
    f = lambda x: np.abs(np.asarray(x) - 0.012)  # noqa: E731
    m = grid_then_golden(lambda x: float(f(x)), f)
    assert m.fx <= f(0.0)


def test_non_finite_raises():
    f = lambda x: np.where(np.asarray(x) > 1, math.nan, 0.0)  # noqa: E731
    with pytest.raises(NumericalDomainError):
        grid_then_golden(lambda x: float(f(x)), f)
