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

import logging

import numpy as np

from collections import namedtuple
from scipy.optimize import linprog, nnls

from sfd_utils.exceptions import DegeneracyError, NumericalError

log = logging.getLogger('sfd_utils.geometry')

HULL_TOLERANCE = 1e-10
SUPPORT_TOLERANCE = 1e-12
REDUCED_COST_TOLERANCE = 1e-9
# Weight of the sum-to-one row in the projection least squares problem.
SIMPLEX_PENALTY = 1e4

simplex_result = namedtuple(
    'simplex_result',
    ['vertex_indices', 'weights', 'extrapolated', 'projection_distance']
)


class SimplexLocator(object):
    """
    Delaunay simplex lookup for a fixed point set.

    A query is located by the lifted linear program
    min sum w_i |p_i|^2 s.t. sum w_i p_i = q, sum w_i = 1, w >= 0,
    whose basic optimum is supported on the Delaunay simplex holding q.
    Lifted heights carry an index-increasing perturbation so ties
    resolve toward the lowest indices.
    """
    def __init__(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        self.n, self.dim = points.shape
        if self.n < self.dim + 1:
            raise DegeneracyError(
                '{0} points cannot span a {1} dimensional space.'.format(
                    self.n, self.dim
                )
            )

        self.center = points.mean(axis=0)
        self.scale = np.abs(points - self.center).max() or 1.0
        self.points = (points - self.center) / self.scale

        if np.linalg.matrix_rank(self.points) < self.dim:
            raise DegeneracyError('Points do not affinely span the space.')

        heights = np.sum(self.points ** 2, axis=1)
        tie_break = 1e-10 * max(1.0, heights.max())
        self.costs = heights + tie_break * np.arange(self.n) / self.n
        self.equalities = np.vstack([self.points.T, np.ones(self.n)])

    def _scaled(self, query):
        return (np.asarray(query, dtype=float) - self.center) / self.scale

    def _solve(self, scaled_query):
        result = linprog(
            self.costs,
            A_eq=self.equalities,
            b_eq=np.append(scaled_query, 1.0),
            bounds=(0, None),
            method='highs-ds'
        )
        if result.status == 1:
            raise NumericalError('Simplex location hit the iteration limit.')
        if result.status not in (0, 2):
            raise NumericalError(
                'Simplex location failed: {0}'.format(result.message)
            )
        return result

    def _rank(self, indices):
        if len(indices) < 2:
            return 0
        vertices = self.points[indices]
        return np.linalg.matrix_rank(vertices[1:] - vertices[0])

    def _complete(self, support, scaled_query, reduced_costs):
        """
        Extend a short support to d+1 affinely independent vertices.

        Zero reduced cost vertices come first in index order, then the
        nearest remaining points.
        """
        chosen = list(support)
        rank = self._rank(chosen)

        candidates = []
        if reduced_costs is not None:
            flat = np.abs(reduced_costs) <= REDUCED_COST_TOLERANCE
            candidates.extend(int(i) for i in np.flatnonzero(flat))

        distances = np.sum((self.points - scaled_query) ** 2, axis=1)
        candidates.extend(int(i) for i in np.lexsort(
            (np.arange(self.n), distances)
        ))

        for index in candidates:
            if len(chosen) == self.dim + 1:
                break
            if index in chosen:
                continue
            trial = chosen + [index]
            trial_rank = self._rank(trial)
            if trial_rank > rank or (not chosen):
                chosen = trial
                rank = trial_rank

        return chosen

    def _from_solution(self, weights, scaled_query, reduced_costs):
        weights = np.where(weights > SUPPORT_TOLERANCE, weights, 0.0)
        support = [int(i) for i in np.flatnonzero(weights)]
        if len(support) < self.dim + 1:
            support = self._complete(support, scaled_query, reduced_costs)

        order = np.argsort(support)
        indices = np.asarray(support)[order]
        values = weights[indices]
        values = values / values.sum()
        return indices, values

    def locate(self, query):
        scaled_query = self._scaled(query)
        result = self._solve(scaled_query)

        if result.status == 0:
            indices, weights = self._from_solution(
                result.x, scaled_query, result.lower.marginals
            )
            return simplex_result(indices, weights, False, 0.0)

        projection_weights, distance = _hull_weights(
            self.points, scaled_query
        )
        projected = self.points.T @ projection_weights
        result = self._solve(projected)
        if result.status == 0:
            indices, weights = self._from_solution(
                result.x, projected, result.lower.marginals
            )
        else:
            indices, weights = self._from_solution(
                projection_weights, projected, None
            )

        distance = distance * self.scale
        return simplex_result(
            indices, weights, distance > HULL_TOLERANCE, float(distance)
        )


def locate_simplex(points, query):
    """
    Delaunay simplex containing query, or holding its hull projection.
    """
    return SimplexLocator(points).locate(query)


def _hull_weights(points, query):
    count = len(points)
    system = np.vstack([points.T, SIMPLEX_PENALTY * np.ones(count)])
    target = np.append(query, SIMPLEX_PENALTY)
    try:
        weights, _ = nnls(system, target, maxiter=50 * count)
    except RuntimeError as error:
        raise NumericalError(
            'Hull projection did not converge: {0}'.format(error)
        )

    total = weights.sum()
    if total <= 0:
        raise NumericalError('Hull projection produced zero weights.')

    weights = weights / total
    distance = float(np.linalg.norm(points.T @ weights - query))
    return weights, distance


def project_to_hull(points, query):
    """
    Nearest convex hull point to query and its distance.

    Interior queries come back unchanged with distance 0.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    query = np.asarray(query, dtype=float)

    center = points.mean(axis=0)
    scale = np.abs(points - center).max() or 1.0
    weights, distance = _hull_weights(
        (points - center) / scale, (query - center) / scale
    )

    if distance * scale <= HULL_TOLERANCE:
        return query.copy(), 0.0
    return points.T @ weights, float(distance * scale)
