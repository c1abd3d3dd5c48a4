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

from sfd_utils.functions import (
    borehole,
    borehole_ranges,
    borehole_space,
    colville,
    colville_space,
    friedman,
    friedman_space,
    hpc_space
)


@pytest.mark.parametrize(
    "point,expected",
    [((1, 1, 1, 1), 0.0), ((0, 0, 0, 0), 42.0), ((2, 4, 1, 1), 91.9)],
    ids=['minimum', 'origin', 'mixed']
)
def test_colville(point, expected):
    assert colville(point)[0] == pytest.approx(expected)


@pytest.mark.parametrize(
    "point,expected",
    [((0, 0, 0, 0), 7.5),
     ((1, 0.5, 0.5, 1), 22.5),
     ((0.5, 0.5, 0.5, 0.5), 10 * np.sin(np.pi / 4) + 7.5)],
    ids=['origin', 'peak', 'center']
)
def test_friedman(point, expected):
    assert friedman(point)[0] == pytest.approx(expected)


def test_friedman_center_value():
    assert friedman([0.5] * 4)[0] == pytest.approx(14.5711, abs=1e-4)


def test_borehole_equal_heads():
    point = np.array([low for _, low, _ in borehole_ranges])
    point[3] = point[5]
    assert borehole(point)[0] == pytest.approx(0.0)


def test_borehole_midpoint():
    r_w, r, t_u, h_u, t_l, h_l, length, k_w = [
        (low + high) / 2 for _, low, high in borehole_ranges
    ]
    log_ratio = np.log(r / r_w)
    expected = 2 * np.pi * t_u * (h_u - h_l) / (
        log_ratio * (
            1 + 2 * length * t_u / (log_ratio * r_w ** 2 * k_w) +
            t_u / t_l
        )
    )
    midpoint = (borehole_space().lower + borehole_space().upper) / 2
    assert borehole(midpoint)[0] == pytest.approx(expected, rel=1e-12)


def test_functions_vectorized():
    points = np.array([[1, 1, 1, 1], [0, 0, 0, 0]], dtype=float)
    assert np.allclose(colville(points), [0.0, 42.0])


@pytest.mark.parametrize(
    "factory,dim,constrained",
    [(colville_space, 4, True),
     (friedman_space, 4, True),
     (borehole_space, 8, False),
     (hpc_space, 4, True)],
    ids=['colville', 'friedman', 'borehole', 'hpc']
)
def test_spaces(factory, dim, constrained):
    space = factory()
    assert space.dim == dim
    assert bool(space.constraints) is constrained
