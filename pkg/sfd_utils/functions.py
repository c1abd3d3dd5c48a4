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

"""
Analytic test functions and the design spaces they are studied on.

Each function takes an n x d array of natural-scale points (a single
point is promoted to one row) and returns n values.
"""

import numpy as np

from sfd_utils.core import DesignSpace, LinearConstraint

borehole_ranges = [
    ('r_w', 0.05, 0.15),
    ('r', 100.0, 50000.0),
    ('T_u', 63070.0, 115600.0),
    ('H_u', 990.0, 1110.0),
    ('T_l', 63.1, 116.0),
    ('H_l', 700.0, 820.0),
    ('L', 1120.0, 1680.0),
    ('K_w', 9855.0, 12045.0)
]


def _rows(x, dim):
    return np.atleast_2d(np.asarray(x, dtype=float)).reshape(-1, dim)


def colville(x):
    x = _rows(x, 4)
    x1, x2, x3, x4 = x.T
    return (
        100 * (x1 ** 2 - x2) ** 2 +
        (x1 - 1) ** 2 +
        (x3 - 1) ** 2 +
        90 * (x3 ** 2 - x4) ** 2 +
        10.1 * ((x2 - 1) ** 2 + (x4 - 1) ** 2) +
        19.8 * (x2 - 1) * (x4 - 1)
    )


def friedman(x):
    """
    Friedman function of four inputs with the fifth fixed at 0.5.
    """
    x = _rows(x, 4)
    x1, x2, x3, x4 = x.T
    return (
        10 * np.sin(np.pi * x1 * x2) +
        20 * (x3 - 0.5) ** 2 +
        10 * x4 +
        2.5
    )


def borehole(x):
    """
    Water flow rate through a borehole.

    Columns follow ``borehole_ranges``.
    """
    x = _rows(x, 8)
    r_w, r, t_u, h_u, t_l, h_l, length, k_w = x.T
    log_ratio = np.log(r / r_w)
    return 2 * np.pi * t_u * (h_u - h_l) / (
        log_ratio * (
            1 + 2 * length * t_u / (log_ratio * r_w ** 2 * k_w) +
            t_u / t_l
        )
    )


def _ordered_pair_constraint(dim=4):
    coefficients = np.zeros(dim)
    coefficients[2] = 1.0
    coefficients[3] = -1.0
    return LinearConstraint(coefficients, 0.0, '>=')


def colville_space():
    return DesignSpace(
        [(-10.0, 10.0)] * 4,
        constraints=[_ordered_pair_constraint()]
    )


def friedman_space():
    return DesignSpace(
        [(0.0, 1.0)] * 4,
        constraints=[_ordered_pair_constraint()]
    )


def borehole_space():
    return DesignSpace(
        [(low, high) for _, low, high in borehole_ranges],
        names=[name for name, _, _ in borehole_ranges]
    )


def hpc_space(levels=None):
    """
    Frequency, threads, log2 file size and log2 record size.

    File size must be at least the record size.
    """
    return DesignSpace(
        [(2.0, 3.5), (1.0, 64.0), (2.0, 14.0), (2.0, 14.0)],
        constraints=[_ordered_pair_constraint()],
        levels=levels,
        names=['frequency', 'threads', 'file_size', 'record_size']
    )


test_functions = {
    'colville': (colville, colville_space),
    'friedman': (friedman, friedman_space),
    'borehole': (borehole, borehole_space)
}
