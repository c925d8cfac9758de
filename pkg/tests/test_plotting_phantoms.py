import math

import numpy as np
import pytest

from ghostedge import ParameterError
from ghostedge.phantoms import aircraft, gray_blocks, make_phantom
from ghostedge.plotting import render_line_plot


def test_plot_raster_shape_and_content():
    raster = render_line_plot([100, 150, 200], [[10.0, 12.0, 15.0], [5.0, 6.0, 8.0]])
    assert raster.shape == (320, 480) and raster.dtype == np.uint8
    assert (raster == 0).any() and (raster == 255).any()
    assert (raster == 40).any() and (raster == 110).any()


def test_plot_is_deterministic():
    args = ([1, 2, 3], [[0.1, 0.5, 0.2]])
    assert np.array_equal(render_line_plot(*args), render_line_plot(*args))


def test_plot_tolerates_nan_and_constant_series():
    raster = render_line_plot([1, 2, 3], [[math.nan, 1.0, 1.0]], width=200, height=120)
    assert raster.shape == (120, 200)


def test_aircraft_is_binary_with_dark_silhouette():
    img = aircraft(64).pixels
    assert set(np.unique(img)) == {0.0, 1.0}
    dark = (img == 0).mean()
    assert 0.1 < dark < 0.3
    # left-right symmetric about the fuselage
    assert (img != img[:, ::-1]).mean() < 0.05


def test_gray_blocks_levels():
    assert set(np.unique(gray_blocks(32).pixels)) == {0.2, 0.45, 0.6, 0.9}


def test_make_phantom():
    assert make_phantom("aircraft", 16).shape == (16, 16)
    with pytest.raises(ParameterError):
        make_phantom("boat")
    with pytest.raises(ParameterError):
        aircraft(4)
