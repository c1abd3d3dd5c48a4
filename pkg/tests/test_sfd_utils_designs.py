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

from scipy.spatial.distance import pdist

from sfd_utils import designs
from sfd_utils.core import Design, DesignSpace, LinearConstraint, to_unit_cube
from sfd_utils.designs import (
    CriterionParams,
    GeneratorSpec,
    bin_to_grid,
    ccd_augment,
    ccd_count,
    constrain_subset,
    gen_grid,
    gen_lhd,
    gen_maxent,
    gen_maximin_lhd,
    gen_maxpro,
    gen_uniform,
    maxent_objective,
    maxpro_criterion,
    phi_m,
    snap_to_levels
)
from sfd_utils.exceptions import (
    BinningError,
    CriterionOverflow,
    EmptyDesignError,
    InfeasibleRegionError,
    InvalidParameterError
)
from sfd_utils.functions import borehole_space, colville_space, hpc_space

quick = CriterionParams(anneal={'max_iterations': 2000})


def _hpc_levels():
    return [
        [2.0, 2.5, 3.0, 3.5],
        [1, 2, 4, 8, 16, 32, 64],
        list(range(2, 15)),
        list(range(2, 15))
    ]


def _random_lhds(count, n, dim, seed=0):
    rng = np.random.default_rng(seed)
    cells = np.argsort(rng.random((count, n, dim)), axis=1)
    return (cells + rng.random((count, n, dim))) / n


@pytest.mark.parametrize(
    "space,levels,expected",
    [(colville_space(), 3, 54),
     (colville_space(), 7, 1372),
     (borehole_space(), 3, 6561)],
    ids=['colville-3', 'colville-7', 'borehole-3']
)
def test_gen_grid_size(space, levels, expected):
    assert gen_grid(space, levels).n == expected


def test_gen_grid_empty():
    space = DesignSpace.unit_cube(
        2, constraints=[LinearConstraint([1.0, 1.0], offset=-3.0)]
    )
    with pytest.raises(EmptyDesignError):
        gen_grid(space, 3)


def test_gen_grid_too_few_levels():
    with pytest.raises(InvalidParameterError):
        gen_grid(DesignSpace.unit_cube(2), 1)


def test_gen_uniform_single_point():
    first = gen_uniform(DesignSpace.unit_cube(3), 1, 5)
    second = gen_uniform(DesignSpace.unit_cube(3), 1, 5)
    assert first.n == 1
    assert np.all((first.points >= 0) & (first.points <= 1))
    assert np.array_equal(first.points, second.points)


def test_gen_uniform_mean():
    design = gen_uniform(DesignSpace.unit_cube(2), 1000, 3)
    assert np.all(np.abs(design.points.mean(axis=0) - 0.5) < 0.05)


def test_gen_uniform_constrained_feasible():
    space = hpc_space()
    design = gen_uniform(space, 200, 1)
    assert design.n == 200
    assert np.all(space.feasible_mask(design.natural_points))


def test_gen_lhd_two_points():
    points = np.sort(gen_lhd(DesignSpace.unit_cube(1), 2, 0).points[:, 0])
    assert 0 <= points[0] < 0.5
    assert 0.5 <= points[1] <= 1


def test_gen_lhd_latin_property():
    design = gen_lhd(DesignSpace.unit_cube(3), 10, 4)
    cells = np.floor(design.points * 10).astype(int)
    for column in cells.T:
        assert sorted(column) == list(range(10))


def test_generator_spec_invalid():
    with pytest.raises(InvalidParameterError):
        GeneratorSpec('sobol', 10)

    with pytest.raises(InvalidParameterError):
        GeneratorSpec('maxpro', 1)

    with pytest.raises(InvalidParameterError):
        GeneratorSpec('grid')


@pytest.mark.parametrize(
    "points,m,expected",
    [([[0.0], [1.0]], 3, 1.0),
     ([[0.0], [0.5]], 2, 2.0),
     ([[0.0], [0.5], [1.0]], 1, 5.0)],
    ids=['unit-distance', 'half-distance', 'collinear']
)
def test_phi_m(points, m, expected):
    assert phi_m(points, m=m) == pytest.approx(expected)


def test_phi_m_duplicates():
    with pytest.raises(CriterionOverflow):
        phi_m([[0.2, 0.2], [0.2, 0.2]])


@pytest.mark.parametrize(
    "anneal,n,expected",
    [({}, 100, 1000000),
     ({'max_iterations': 5000}, 100, 5000),
     ({'iterations_per_point': 10, 'max_iterations': 5000}, 100, 1000)],
    ids=['uncapped', 'capped', 'under-cap']
)
def test_criterion_iterations(anneal, n, expected):
    assert CriterionParams(anneal=anneal).iterations(n) == expected


def test_maximin_two_points_separated():
    design = gen_maximin_lhd(DesignSpace.unit_cube(1), 2, quick, seed=1)
    points = np.sort(design.points[:, 0])
    assert points[0] < 0.5 <= points[1]


@pytest.mark.parametrize("seed", [0, 1, 2], ids=['s0', 's1', 's2'])
def test_maximin_improves_on_start(seed):
    start = designs._latin_points(10, 2, np.random.default_rng([seed, 1]))
    design = gen_maximin_lhd(DesignSpace.unit_cube(2), 10, quick, seed=seed)
    assert phi_m(design, m=4) <= phi_m(start, m=4)


toy_seeds = pytest.mark.parametrize(
    "seed", range(5), ids=['s%d' % seed for seed in range(5)]
)


@toy_seeds
def test_maximin_near_random_best(seed):
    candidates = _random_lhds(10000, 4, 2, seed=seed)
    best = min(phi_m(points, m=4) for points in candidates)
    design = gen_maximin_lhd(DesignSpace.unit_cube(2), 4, seed=seed)
    assert phi_m(design, m=4) <= 1.1 * best


@pytest.mark.parametrize(
    "points,expected",
    [([[0.0, 0.0], [1.0, 1.0]], 1.0),
     ([[0.0, 0.0], [0.5, 1.0]], 4.0)],
    ids=['diagonal', 'short']
)
def test_maxpro_criterion(points, expected):
    assert maxpro_criterion(points) == pytest.approx(expected)


def test_maxpro_shared_coordinate():
    with pytest.raises(CriterionOverflow):
        maxpro_criterion([[0.3, 0.1], [0.3, 0.9]])


def test_maxpro_distinct_projections():
    design = gen_maxpro(DesignSpace.unit_cube(2), 4, quick, seed=3)
    for column in design.points.T:
        assert len(np.unique(column)) == 4


def test_maxpro_deterministic():
    first = gen_maxpro(colville_space(), 20, quick, seed=7)
    second = gen_maxpro(colville_space(), 20, quick, seed=7)
    assert np.array_equal(first.points, second.points)


@pytest.mark.slow
@toy_seeds
def test_maxpro_near_random_best(seed):
    candidates = _random_lhds(10000, 6, 3, seed=seed)
    best = min(maxpro_criterion(points) for points in candidates)
    design = gen_maxpro(DesignSpace.unit_cube(3), 6, seed=seed)
    assert maxpro_criterion(design) <= 1.1 * best


def test_maxent_objective_identity():
    assert maxent_objective([[0.0], [1.0]], a=0.5) == \
        pytest.approx(0.0, abs=1e-8)


def test_maxent_objective_duplicates():
    assert maxent_objective([[0.4], [0.4]], a=0.5) < -20


def test_maxent_objective_pair():
    expected = np.log(1 - 0.3125 ** 2)
    assert maxent_objective([[0.0], [0.5]], a=1.0) == \
        pytest.approx(expected, abs=1e-6)


def test_maxent_separates_pair():
    params = CriterionParams(a=0.3)
    design = gen_maxent(DesignSpace.unit_cube(1), 2, params, seed=0)
    assert abs(design.points[0, 0] - design.points[1, 0]) >= 0.3 - 1e-3


@pytest.mark.slow
@toy_seeds
def test_maxent_near_random_best(seed):
    rng = np.random.default_rng(seed)
    best = max(
        maxent_objective(rng.random((5, 2))) for _ in range(10000)
    )
    design = gen_maxent(DesignSpace.unit_cube(2), 5, seed=seed)
    assert maxent_objective(design) >= best - 0.1 * abs(best) - 1e-8


def test_constrain_subset_unconstrained():
    generator = GeneratorSpec('lhd', 12, seed=2)
    design = constrain_subset(generator, DesignSpace.unit_cube(3), 12)
    assert design.oversample_factor == 1
    assert design.n == 12


def test_constrain_subset_half_space():
    generator = GeneratorSpec('uniform', 20, seed=2)
    design = constrain_subset(generator, colville_space(), 20)
    assert design.n == 20
    assert design.oversample_factor <= 3
    assert np.all(colville_space().feasible_mask(design.natural_points))


def test_constrain_subset_infeasible():
    space = DesignSpace.unit_cube(
        2, constraints=[LinearConstraint([1.0, 0.0], offset=-2.0)]
    )
    with pytest.raises(InfeasibleRegionError):
        constrain_subset(GeneratorSpec('uniform', 5), space, 5)


@pytest.mark.parametrize(
    "space,expected",
    [(DesignSpace.unit_cube(4), 25),
     (colville_space(), 19),
     (borehole_space(), 273)],
    ids=['4d', '4d-constrained', '8d']
)
def test_ccd_count(space, expected):
    assert ccd_count(space) == expected


def test_ccd_augment():
    space = colville_space()
    design = gen_lhd(space, 35, 0)
    augmented, report = ccd_augment(design)
    assert report.n_a == 19
    assert report.requested_aug == 25
    assert augmented.n == 54
    assert augmented.tags.count('augmented') == 19
    assert augmented.name == 'lhd'


def test_ccd_augment_skips_existing():
    space = DesignSpace.unit_cube(2)
    design = Design(space, [[0.5, 0.5], [0.2, 0.7]], 'uniform')
    augmented, report = ccd_augment(design)
    assert report.n_a == 8
    assert augmented.n == 10


@pytest.mark.parametrize(
    "value,expected",
    [(4.4, 4.0), (4.5, 4.0), (4.6, 5.0), (1.0, 2.0), (20.0, 14.0)],
    ids=['nearest', 'tie-lower', 'upper', 'below', 'above']
)
def test_snap_to_levels(value, expected):
    levels = np.arange(2.0, 15.0)
    assert snap_to_levels([value], levels)[0] == expected


def test_bin_to_grid_repairs():
    loose = DesignSpace(
        [(2.0, 3.5), (1.0, 64.0), (2.0, 14.0), (2.0, 14.0)],
        levels=_hpc_levels()
    )
    point = [[2.0, 1.0, 4.2, 5.9]]
    design = Design(loose, to_unit_cube(loose, point), 'uniform')
    binned = bin_to_grid(design, hpc_space(_hpc_levels()))
    assert np.allclose(binned.natural_points, [[2.0, 1.0, 4.0, 4.0]])


def test_bin_to_grid_identity():
    space = hpc_space(_hpc_levels())
    natural = np.array([
        [2.0, 1.0, 4.0, 2.0],
        [3.0, 16.0, 10.0, 10.0],
        [3.5, 64.0, 14.0, 3.0]
    ])
    design = Design(space, to_unit_cube(space, natural), 'maxpro')
    binned = bin_to_grid(design)
    assert np.allclose(binned.natural_points, natural)


def test_bin_to_grid_fills_duplicates():
    space = hpc_space(_hpc_levels())
    natural = np.array([[2.0, 1.0, 4.1, 2.0], [2.0, 1.0, 3.9, 2.0]])
    design = Design(space, to_unit_cube(space, natural), 'uniform', seed=3)
    binned = bin_to_grid(design)
    assert binned.n == 2
    assert not binned.has_duplicates()
    assert np.all(space.feasible_mask(binned.natural_points))


def test_bin_to_grid_exhausted():
    space = DesignSpace([(0.0, 1.0)], levels=[[0.0, 1.0]])
    design = Design(space, [[0.1], [0.5], [0.9]], 'uniform')
    with pytest.raises(BinningError):
        bin_to_grid(design)


def test_bin_to_grid_continuous():
    design = gen_uniform(DesignSpace.unit_cube(2), 3, 0)
    with pytest.raises(InvalidParameterError):
        bin_to_grid(design)


def test_designs_have_no_duplicates():
    design = gen_maximin_lhd(colville_space(), 30, quick, seed=4)
    assert np.min(pdist(design.points)) > 0
