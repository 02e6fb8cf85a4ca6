import math

import numpy as np
import pytest

from kirchhoff_track.errors import ConfigError
from kirchhoff_track.geometry import (AntennaArray, build_disk_grid, uniform_circular_array,
                                      validate_far_condition)


def test_first_antenna_on_x_axis():
    a = uniform_circular_array(16, 0.09)
    assert np.allclose(a.positions[0], [0.09, 0.0], atol=0)
    assert a.angles[1] - a.angles[0] == pytest.approx(math.pi / 8)


@pytest.mark.parametrize("n", [2, 3, 7, 16, 33])
def test_positions_sum_to_zero(n):
    a = uniform_circular_array(n, 0.09)
    assert np.allclose(a.positions.sum(axis=0), 0.0, atol=1e-15)
    assert np.allclose(np.hypot(*a.positions.T), 0.09, rtol=1e-12)
    assert np.all(np.diff(a.angles) > 0)


def test_offset_keeps_angles_sorted():
    a = uniform_circular_array(8, 0.09, offset_rad=-0.3)
    assert np.all(np.diff(a.angles) > 0)
    assert a.angles.min() >= 0 and a.angles.max() < 2 * math.pi


def test_too_few_antennas():
    with pytest.raises(ConfigError):
        uniform_circular_array(1, 0.09)
    with pytest.raises(ConfigError):
        uniform_circular_array(8, 0.0)


def test_off_circle_rejected():
    with pytest.raises(ConfigError):
        AntennaArray(np.array([[0.09, 0.0], [0.0, 0.091]]), 0.09, np.array([0.0, math.pi / 2]))


def test_rotation_by_one_step_permutes():
    a = uniform_circular_array(12, 0.09)
    b = a.rotated(2 * math.pi / 12)
    # same set of sites: antenna n moved onto the site of antenna n + 1
    moved = a.positions @ np.array([[math.cos(math.pi / 6), math.sin(math.pi / 6)],
                                    [-math.sin(math.pi / 6), math.cos(math.pi / 6)]])
    assert np.allclose(moved, np.roll(a.positions, -1, axis=0), atol=1e-15)
    d = np.linalg.norm(b.positions[:, None, :] - a.positions[None, :, :], axis=-1)
    assert np.all(d.min(axis=1) < 1e-15)


def test_grid_contains_origin_and_is_clipped():
    g = build_disk_grid(0.085, 0.085)
    assert any(np.all(p == 0) for p in g.points)
    g = build_disk_grid(0.085, 0.0017)
    assert np.all(np.hypot(*g.points.T) <= 0.085)
    expect = math.pi * 0.085 ** 2 / 0.0017 ** 2
    assert abs(g.size - expect) / expect < 0.01


def test_grid_spacing_and_order():
    g = build_disk_grid(0.02, 0.005)
    assert np.allclose(g.points[:, 0], g.ix * 0.005)
    assert np.allclose(g.points[:, 1], g.iy * 0.005)
    keys = list(zip(g.iy.tolist(), g.ix.tolist()))
    assert keys == sorted(keys)


def test_grid_deterministic():
    a = build_disk_grid(0.085, 0.0017)
    b = build_disk_grid(0.085, 0.0017)
    assert a.points.tobytes() == b.points.tobytes()


@pytest.mark.parametrize("step", [0.0, -1.0, 0.1])
def test_grid_bad_step(step):
    with pytest.raises(ConfigError):
        build_disk_grid(0.085, step)


def test_far_condition_default_setup(water, array16, roi_grid):
    rep = validate_far_condition(array16, roi_grid, water.wavenumber)
    assert rep.passed
    assert rep.min_value == pytest.approx(abs(water.wavenumber) * 0.005, rel=1e-6)


def test_far_condition_degenerate_and_scaling(water, array16):
    g = build_disk_grid(0.09, 0.09)
    assert not validate_far_condition(array16, g, water.wavenumber).passed
    g = build_disk_grid(0.085, 0.0085)
    base = validate_far_condition(array16, g, water.wavenumber).min_value
    scaled = validate_far_condition(array16, g, water.wavenumber.scaled(10)).min_value
    assert scaled == pytest.approx(10 * base, rel=1e-12)
