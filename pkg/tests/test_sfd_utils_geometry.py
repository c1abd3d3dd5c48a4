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

from sfd_utils.core import DesignSpace
from sfd_utils.designs import ccd_augment, gen_uniform
from sfd_utils.exceptions import DegeneracyError
from sfd_utils.geometry import SimplexLocator, locate_simplex, project_to_hull


def _circumsphere(vertices):
    base = vertices[0]
    matrix = 2 * (vertices[1:] - base)
    rhs = np.sum(vertices[1:] ** 2, axis=1) - base @ base
    center = np.linalg.solve(matrix, rhs)
    return center, np.linalg.norm(base - center)


def test_locate_vertex():
    points = np.random.default_rng(1).random((10, 2))
    result = locate_simplex(points, points[3])
    assert len(result.vertex_indices) == 3
    weights = dict(zip(result.vertex_indices.tolist(), result.weights))
    assert weights[3] == pytest.approx(1.0)
    assert sum(weights.values()) == pytest.approx(1.0)
    assert not result.extrapolated


def test_locate_centroid():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    result = locate_simplex(points, points.mean(axis=0))
    assert result.vertex_indices.tolist() == [0, 1, 2]
    assert np.allclose(result.weights, 1.0 / 3.0)


@pytest.mark.parametrize(
    "dim,seed",
    [(2, seed) for seed in range(20)] + [(3, seed) for seed in range(20)]
)
def test_locate_empty_circumsphere(dim, seed):
    rng = np.random.default_rng(1000 * dim + seed)
    n = min(60, 12 + 2 * seed)
    points = rng.random((n, dim))
    locator = SimplexLocator(points)
    slope = rng.normal(size=dim)

    queries = 200 if dim == 2 else 50
    for _ in range(queries):
        corners = points[rng.choice(n, dim + 1, replace=False)]
        query = rng.dirichlet(np.ones(dim + 1)) @ corners
        result = locator.locate(query)

        assert not result.extrapolated
        assert len(result.vertex_indices) == dim + 1
        assert abs(np.sum(result.weights) - 1.0) <= 1e-10

        vertices = points[result.vertex_indices]
        assert np.allclose(result.weights @ vertices, query, atol=1e-9)
        interpolated = result.weights @ (1.0 + vertices @ slope)
        assert interpolated == pytest.approx(1.0 + query @ slope, abs=1e-8)

        center, radius = _circumsphere(vertices)
        others = np.delete(points, result.vertex_indices, axis=0)
        distances = np.linalg.norm(others - center, axis=1)
        assert np.all(distances >= radius - 1e-9)


@pytest.mark.parametrize("dim", [2, 3])
def test_ccd_augmented_cube_has_no_extrapolation(dim):
    space = DesignSpace.unit_cube(dim)
    design, _ = ccd_augment(gen_uniform(space, 15, seed=dim), space)
    locator = SimplexLocator(design.points)

    queries = np.random.default_rng(dim).random((100, dim))
    for query in queries:
        result = locator.locate(query)
        assert not result.extrapolated
        assert result.projection_distance == 0.0


def test_locate_outside_hull():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    result = locate_simplex(points, [2.0, 0.5])
    assert result.extrapolated
    assert result.projection_distance == pytest.approx(1.0, abs=1e-6)
    assert np.allclose(
        result.weights @ points[result.vertex_indices], [1.0, 0.5],
        atol=1e-6
    )


@pytest.mark.parametrize(
    "points",
    [np.array([[0.0, 0.0], [1.0, 1.0]]),
     np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])],
    ids=['too-few', 'collinear']
)
def test_locator_degenerate(points):
    with pytest.raises(DegeneracyError):
        SimplexLocator(points)


def test_project_interior():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    projection, distance = project_to_hull(points, [0.3, 0.6])
    assert distance == 0.0
    assert np.allclose(projection, [0.3, 0.6])


def test_project_segment():
    projection, distance = project_to_hull([[0.0], [1.0]], [1.5])
    assert projection[0] == pytest.approx(1.0, abs=1e-6)
    assert distance == pytest.approx(0.5, abs=1e-6)


def test_project_corner():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    projection, distance = project_to_hull(points, [2.0, 2.0])
    assert np.allclose(projection, [1.0, 1.0], atol=1e-6)
    assert distance == pytest.approx(np.sqrt(2.0), abs=1e-6)
