import numpy as np
import pytest

from ergodisk.grid import GridSpec, grid_max, polar_points


def test_dyadic_radii_and_thetas():
    g = GridSpec(levels=3, angles=4)
    assert np.allclose(g.dyadic_radii(), [0, 0.5, 0.75, 0.875])
    assert np.allclose(g.dyadic_radii(start=1), [0.5, 0.75, 0.875])
    assert np.allclose(g.thetas(), [0, np.pi / 2, np.pi, 3 * np.pi / 2])
    assert g.to_dict() == {"max_dyadic_level": 3, "angles": 4}


def test_grid_spec_rejects_empty():
    with pytest.raises(ValueError):
        GridSpec(levels=0)
    with pytest.raises(ValueError):
        GridSpec(angles=0)


def test_polar_layout_and_real_axis():
    z = polar_points([0.5, 0.75], [0.0, np.pi])
    assert z.shape == (2, 2)
    assert z[0, 1] == 0.75
    assert z[1, 0] == pytest.approx(-0.5)


def test_grid_max_tie_breaks_to_first_angle_and_radius():
    g = GridSpec(levels=3, angles=8)
    z = polar_points(g.dyadic_radii(), g.thetas())
    v = np.ones(z.shape)
    s = grid_max(v, z, slice(0, 3), g.coarse_angle_slice())
    assert s.point == 0
    assert s.gap == 0


def test_grid_max_reports_coarse_gap():
    g = GridSpec(levels=3, angles=4)
    z = polar_points(g.dyadic_radii(), g.thetas())
    v = np.abs(z)
    s = grid_max(v, z, slice(0, 3), g.coarse_angle_slice())
    assert s.value == 0.875
    assert s.coarse_value == 0.75
    assert s.gap == pytest.approx(0.125)
    assert s.radius == 0.875
