import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mobility_game.search import (
    bracketed_golden_max,
    golden_section_max,
    grid_max,
    payment_grid,
    zoom_grid_max,
)


@given(st.floats(-5, 15), st.floats(0.1, 5))
def test_golden_matches_clipped_vertex(center, curvature):
    x, fx = golden_section_max(lambda x: -curvature * (x - center) ** 2, 0.0, 10.0, 1e-9)
    expected = min(max(center, 0.0), 10.0)
    assert x == pytest.approx(expected, abs=1e-6)


def test_golden_returns_exact_boundary():
    assert golden_section_max(lambda x: -x, 2.0, 5.0)[0] == 2.0
    assert golden_section_max(lambda x: x, 2.0, 5.0)[0] == 5.0


def test_golden_tie_prefers_lowest():
    assert golden_section_max(lambda x: 1.0, 0.0, 10.0)[0] == 0.0


def test_golden_degenerate_interval():
    assert golden_section_max(lambda x: x, 3.0, 3.0) == (3.0, 3.0)
    with pytest.raises(ValueError):
        golden_section_max(lambda x: x, 3.0, 2.0)


def bimodal(x):
    return np.maximum(-(x - 1.0) ** 2 + 1.0, -4 * (x - 8.0) ** 2 + 2.0)


def test_bracketed_and_zoom_find_global_peak():
    x, fx = bracketed_golden_max(lambda x: float(bimodal(x)), 0.0, 10.0, 1e-9)
    assert x == pytest.approx(8.0, abs=1e-6) and fx == pytest.approx(2.0)
    x, fx = zoom_grid_max(bimodal, 0.0, 10.0, 1e-9)
    assert x == pytest.approx(8.0, abs=1e-6) and fx == pytest.approx(2.0)


def test_zoom_handles_cusp():
    f = lambda x: -np.abs(x - math.pi) ** (2 / 3)  # noqa: E731
    x, fx = zoom_grid_max(f, 0.0, 10.0, 1e-9)
    assert x == pytest.approx(math.pi, abs=1e-8)


def test_grid_max_first_argmax():
    x, fx = grid_max(lambda xs: np.ones_like(xs), 0.0, 1.0, 11)
    assert x == 0.0
    x, fx = grid_max(lambda xs: -(xs - 0.3) ** 2, 0.0, 1.0, 11)
    assert x == pytest.approx(0.3)


def test_payment_grid():
    assert np.allclose(payment_grid(0, 10, 21), np.arange(21) * 0.5)
    assert payment_grid(3, 3, 21).tolist() == [3.0]
