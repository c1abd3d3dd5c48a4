# Copyright (c) 2026 sfd-utils developers, All rights reserved.
#
# This file is part of sfd-utils. sfd-utils provides space-filling
# designs, surrogate models and a benchmark harness for computer
# experiments.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

import numpy as np
import pytest

from sfd_utils.core import (
    Dataset,
    Design,
    DesignSpace,
    LinearConstraint,
    from_unit_cube,
    is_feasible,
    mape,
    mape_details,
    rmse,
    to_unit_cube
)
from sfd_utils.exceptions import (
    BoundsError,
    DegenerateMetricError,
    InvalidParameterError,
    ShapeError
)
from sfd_utils.functions import borehole_space, hpc_space


@pytest.mark.parametrize(
    "bounds,point,expected",
    [((2, 14), 2, 0.0), ((2, 14), 14, 1.0), ((2.0, 3.5), 2.75, 0.5)],
    ids=['lower', 'upper', 'midpoint']
)
def test_to_unit_cube(bounds, point, expected):
    space = DesignSpace([bounds])
    assert to_unit_cube(space, [[point]])[0, 0] == pytest.approx(expected)


def test_to_unit_cube_out_of_bounds():
    space = DesignSpace([(2, 14)], names=['file_size'])
    with pytest.raises(BoundsError) as error:
        to_unit_cube(space, [[15.0]])

    assert 'file_size' in str(error.value)
    assert '15.0' in str(error.value)


def test_unit_cube_maps_back():
    space = hpc_space()
    natural = np.array([[2.0, 1.0, 4.0, 2.0], [3.5, 64.0, 14.0, 14.0]])
    unit = to_unit_cube(space, natural)
    assert np.allclose(from_unit_cube(space, unit), natural)


@pytest.mark.parametrize(
    "point,expected",
    [((2.0, 1, 4, 2), True), ((2.0, 1, 2, 4), False)],
    ids=['file-above-record', 'record-above-file']
)
def test_is_feasible_hpc(point, expected):
    assert is_feasible(hpc_space(), point) is expected


def test_is_feasible_unconstrained():
    space = borehole_space()
    assert is_feasible(space, (space.lower + space.upper) / 2)


def test_constraint_sense_less_equal():
    constraint = LinearConstraint([1.0, 1.0], offset=-1.0, sense='<=')
    slack = constraint.slack([[0.2, 0.3], [0.9, 0.9]])
    assert slack[0] > 0
    assert slack[1] < 0


def test_constraint_invalid():
    with pytest.raises(InvalidParameterError):
        LinearConstraint([1.0], sense='==')

    with pytest.raises(InvalidParameterError):
        LinearConstraint([0.0, 0.0])


def test_space_from_dict_round_trip():
    space = DesignSpace.from_dict({
        'dim': 2,
        'bounds': [[0, 1], [0, 10]],
        'constraints': [{'coefficients': [1, -0.1]}],
        'levels': [[0, 0.5, 1], [0, 5, 10]]
    })
    again = DesignSpace.from_dict(space.to_dict())
    assert again.dim == 2
    assert again.is_discrete
    assert np.array_equal(again.upper, [1.0, 10.0])
    assert len(again.grid_cells()) == 6


def test_space_levels_outside_bounds():
    with pytest.raises(BoundsError):
        DesignSpace([(0, 1)], levels=[[0, 2]])


def test_design_rejects_infeasible_point():
    space = DesignSpace.unit_cube(
        2, constraints=[LinearConstraint([1.0, -1.0])]
    )
    with pytest.raises(BoundsError):
        Design(space, [[0.1, 0.9]], 'uniform')


def test_design_rejects_sfd_duplicates():
    space = DesignSpace.unit_cube(2)
    with pytest.raises(ShapeError):
        Design(space, [[0.5, 0.5], [0.5, 0.5]], 'lhd')

    grid = Design(space, [[0.5, 0.5], [0.5, 0.5]], 'grid')
    assert grid.has_duplicates()


def test_design_tags_and_name():
    space = DesignSpace.unit_cube(1)
    design = Design(
        space,
        [[0.2], [0.7], [0.0]],
        ['maxpro', 'maxpro', 'ccd'],
        augmented=[False, False, True]
    )
    assert design.tags == ['sfd', 'sfd', 'augmented']
    assert design.name == 'maxpro'
    assert design.is_sfd


def test_dataset_normalized():
    space = DesignSpace.unit_cube(1)
    design = Design(space, [[0.0], [0.5], [1.0]], 'grid')
    data = Dataset(design, [2.0, 4.0, 6.0]).normalized()
    assert np.allclose(data.responses, [0.0, 0.5, 1.0])
    assert np.allclose(data.denormalize([0.25]), [3.0])

    constant = Dataset(design, [3.0, 3.0, 3.0]).normalized()
    assert np.allclose(constant.responses, 0.0)


def test_dataset_shape_mismatch():
    design = Design(DesignSpace.unit_cube(1), [[0.0], [1.0]], 'grid')
    with pytest.raises(ShapeError):
        Dataset(design, [1.0])


@pytest.mark.parametrize(
    "truth,predicted,expected",
    [((1, 2, 3), (1, 2, 3), 0.0),
     ((0, 0), (3, 4), np.sqrt(12.5)),
     ((5,), (2,), 3.0)],
    ids=['perfect', 'pair', 'single']
)
def test_rmse(truth, predicted, expected):
    assert rmse(truth, predicted) == pytest.approx(expected)


@pytest.mark.parametrize("seed", [0, 1, 2], ids=['s0', 's1', 's2'])
def test_rmse_pair_order(seed):
    rng = np.random.default_rng(seed)
    truth = rng.normal(size=40)
    predicted = truth + rng.normal(scale=0.3, size=40)
    order = rng.permutation(40)
    assert rmse(truth[order], predicted[order]) == \
        pytest.approx(rmse(truth, predicted), rel=1e-12)


def test_rmse_shape_mismatch():
    with pytest.raises(ShapeError):
        rmse([1, 2], [1])


@pytest.mark.parametrize(
    "truth,predicted,expected",
    [((10, 20), (10, 20), 0.0),
     ((10,), (11,), 0.1),
     ((100, 200), (110, 180), 0.1)],
    ids=['perfect', 'single', 'pair']
)
def test_mape(truth, predicted, expected):
    assert mape(truth, predicted) == pytest.approx(expected)


def test_mape_excludes_near_zero():
    value, excluded = mape_details([0.0, 1e-12, 10.0], [5.0, 5.0, 11.0])
    assert value == pytest.approx(0.1)
    assert excluded == 2


def test_mape_all_zero():
    with pytest.raises(DegenerateMetricError):
        mape([0.0, 0.0], [1.0, 2.0])
