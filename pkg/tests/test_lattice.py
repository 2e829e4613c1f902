import numpy as np
import pytest

from hpbec.dispersion import quadratic_dispersion
from hpbec.lattice import build_lattice_modes

DISP = quadratic_dispersion()


def test_contains_zero_mode():
    modes = build_lattice_modes(8.0, DISP, 1.0)
    assert modes.zero_mask().sum() == 1
    assert np.all(modes.coords[modes.zero_mask()] == 0)


def test_closed_under_sign_flips():
    modes = build_lattice_modes(6.0, DISP, 1.0)
    coord_set = {tuple(c) for c in modes.coords}
    for c in modes.coords[:500]:
        for axis in range(3):
            flipped = list(c)
            flipped[axis] = -flipped[axis]
            assert tuple(flipped) in coord_set


def test_truncation_tail_bound_invariant():
    for L in (5.0, 10.0, 20.0):
        modes = build_lattice_modes(L, DISP, 1.0)
        assert modes.tail_bound <= 1e-12 * modes.included_weight


def test_masks_partition_modes():
    modes = build_lattice_modes(7.0, DISP, 1.0)
    z = modes.zero_mask()
    interior = modes.all_nonzero_mask()
    boundary = modes.boundary_mask()
    assert not np.any(z & interior)
    assert not np.any(z & boundary)
    assert not np.any(interior & boundary)
    assert np.all(z | interior | boundary)


def test_one_dimensional_has_no_boundary_modes():
    disp1 = quadratic_dispersion(dimension=1)
    modes = build_lattice_modes(20.0, disp1, 1.0)
    assert modes.boundary_mask().sum() == 0
    assert modes.all_nonzero_mask().sum() == modes.num_modes - 1


def test_spacing_and_cell_volume():
    modes = build_lattice_modes(10.0, DISP, 1.0)
    assert modes.spacing == pytest.approx(2.0 * np.pi / 10.0)
    assert modes.cell_volume() == pytest.approx((2.0 * np.pi / 10.0) ** 3)


def test_momenta_consistent_with_coords():
    modes = build_lattice_modes(9.0, DISP, 1.0)
    assert np.allclose(modes.momenta, modes.coords * modes.spacing)


def test_mode_count_grows_like_volume():
    small = build_lattice_modes(10.0, DISP, 1.0)
    large = build_lattice_modes(20.0, DISP, 1.0)
    ratio = large.num_modes / small.num_modes
    assert 6.0 < ratio < 10.0  # ~ 2^3 with boundary effects


def test_invalid_inputs():
    with pytest.raises(ValueError):
        build_lattice_modes(0.0, DISP, 1.0)
    with pytest.raises(ValueError):
        build_lattice_modes(5.0, DISP, 1.0, num_internal=0)
