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
Multivariate adaptive regression splines.

Basis functions are products of hinges max(0, s (x_v - t)) stored as
lists of (factor, knot, sign) triples; the empty product is the
intercept.
"""

import logging

import numpy as np

log = logging.getLogger('sfd_utils.mars')

_EPSILON = 1e-12


def hinge_products(basis, points):
    """
    Evaluate basis functions on points, one column per basis.
    """
    points = np.atleast_2d(points)
    columns = np.ones((len(points), len(basis)))
    for column, hinges in enumerate(basis):
        for factor, knot, sign in hinges:
            columns[:, column] *= np.maximum(
                0.0, sign * (points[:, factor] - knot)
            )
    return columns


def candidate_knots(values, max_knots):
    """
    Unique observed values without the maximum, subsampled evenly.

    The minimum is always kept so a linear term stays reachable.
    """
    unique = np.unique(values)
    if len(unique) > 1:
        unique = unique[:-1]
    if len(unique) > max_knots:
        picks = np.unique(
            np.round(np.linspace(0, len(unique) - 1, max_knots)).astype(int)
        )
        unique = unique[picks]
    return unique


class MarsModel(object):
    """
    Fitted MARS basis and coefficients.
    """
    def __init__(self, basis, coefficients, gcv=None, max_terms=None,
                 max_degree=None):
        self.basis = [list(map(tuple, hinges)) for hinges in basis]
        self.coefficients = np.asarray(coefficients, dtype=float)
        self.gcv = gcv
        self.max_terms = max_terms
        self.max_degree = max_degree

    def predict(self, points):
        return hinge_products(self.basis, points) @ self.coefficients

    @property
    def degree(self):
        return max(len(hinges) for hinges in self.basis)


class MarsFitter(object):
    """
    Forward stepwise hinge selection followed by GCV pruning.
    """
    def __init__(
        self,
        penalty=3.0,
        threshold=1e-4,
        max_knots=20
    ):
        self.penalty = penalty
        self.threshold = threshold
        self.max_knots = max_knots

    def forward(self, points, responses, max_terms, max_degree):
        """
        Greedy forward pass returning basis terms in the order added.

        Each step adds the mirrored hinge pair that most reduces the
        residual sum of squares, evaluated against an orthonormal basis
        of the current columns.
        """
        n = len(responses)
        basis = [[]]
        orthonormal = np.ones((n, 1)) / np.sqrt(n)
        residual = responses - responses.mean()
        total = float(residual @ residual)

        if total <= 0:
            return basis

        while len(basis) + 1 < max_terms:
            rss = float(residual @ residual)
            if rss <= _EPSILON * total:
                break

            best = self._best_pair(
                points, basis, orthonormal, residual, max_degree
            )
            if best is None or best[0] / total < self.threshold:
                break

            _, parent, factor, knot = best
            for sign in (1.0, -1.0):
                hinges = basis[parent] + [(factor, float(knot), sign)]
                column = hinge_products([hinges], points)[:, 0]
                column = column - orthonormal @ (orthonormal.T @ column)
                column = column - orthonormal @ (orthonormal.T @ column)
                norm = np.linalg.norm(column)
                if norm <= np.sqrt(_EPSILON) * np.sqrt(n):
                    continue
                column = column / norm
                orthonormal = np.column_stack([orthonormal, column])
                residual = residual - column * (column @ residual)
                basis.append(hinges)

        return basis

    def _best_pair(self, points, basis, orthonormal, residual, max_degree):
        best = None
        parent_columns = hinge_products(basis, points)
        for parent, hinges in enumerate(basis):
            if len(hinges) >= max_degree:
                continue

            used = {factor for factor, _, _ in hinges}
            active = parent_columns[:, parent] > 0
            for factor in range(points.shape[1]):
                if factor in used:
                    continue

                knots = candidate_knots(
                    points[active, factor], self.max_knots
                )
                if len(knots) == 0:
                    continue

                reduction = self._pair_reduction(
                    parent_columns[:, parent],
                    points[:, factor],
                    knots,
                    orthonormal,
                    residual
                )
                index = int(np.argmax(reduction))
                if best is None or reduction[index] > best[0]:
                    best = (float(reduction[index]), parent, factor,
                            knots[index])
        return best

    @staticmethod
    def _pair_reduction(parent, values, knots, orthonormal, residual):
        """
        RSS reduction of adding both mirrored hinges, per knot.
        """
        gaps = values[:, None] - knots[None, :]
        right = parent[:, None] * np.maximum(0.0, gaps)
        left = parent[:, None] * np.maximum(0.0, -gaps)
        right = right - orthonormal @ (orthonormal.T @ right)
        left = left - orthonormal @ (orthonormal.T @ left)

        g11 = np.sum(right ** 2, axis=0)
        g22 = np.sum(left ** 2, axis=0)
        g12 = np.sum(right * left, axis=0)
        z1 = residual @ right
        z2 = residual @ left

        with np.errstate(divide='ignore', invalid='ignore'):
            single_right = np.where(g11 > _EPSILON, z1 ** 2 / g11, 0.0)
            single_left = np.where(g22 > _EPSILON, z2 ** 2 / g22, 0.0)
            det = g11 * g22 - g12 ** 2
            pair = (g22 * z1 ** 2 - 2 * g12 * z1 * z2 + g11 * z2 ** 2) / det

        scale = np.maximum(g11 * g22, _EPSILON)
        well_posed = det > 1e-10 * scale
        reduction = np.where(
            well_posed, pair, np.maximum(single_right, single_left)
        )
        return np.nan_to_num(reduction, nan=0.0, posinf=0.0)

    def complexity(self, terms):
        return terms + self.penalty * (terms - 1) / 2.0

    def gcv(self, rss, n, terms):
        effective = self.complexity(terms)
        if effective >= n:
            return np.inf
        return (rss / n) / (1.0 - effective / n) ** 2

    def prune(self, points, responses, basis):
        """
        Backward elimination scored by GCV.

        Terms are dropped one at a time by smallest RSS increase; the
        smallest model reaching the minimum GCV is returned.
        """
        n = len(responses)
        kept = list(range(len(basis)))
        columns = hinge_products(basis, points)

        def solve(indices):
            matrix = columns[:, indices]
            coefficients = np.linalg.lstsq(matrix, responses, rcond=None)[0]
            residual = responses - matrix @ coefficients
            return coefficients, float(residual @ residual)

        coefficients, rss = solve(kept)
        path = [(self.gcv(rss, n, len(kept)), list(kept), coefficients)]

        while len(kept) > 1:
            matrix = columns[:, kept]
            gram_inverse = np.linalg.pinv(matrix.T @ matrix)
            diagonal = np.diag(gram_inverse)
            with np.errstate(divide='ignore', invalid='ignore'):
                increase = np.where(
                    diagonal > 0, coefficients ** 2 / diagonal, 0.0
                )
            increase[0] = np.inf
            drop = int(np.argmin(increase))
            kept = kept[:drop] + kept[drop + 1:]
            coefficients, rss = solve(kept)
            path.append((self.gcv(rss, n, len(kept)), list(kept),
                         coefficients))

        path.sort(key=lambda item: (item[0], len(item[1])))
        best_gcv, indices, coefficients = path[0]
        return [basis[i] for i in indices], coefficients, best_gcv

    def fit(self, points, responses, max_terms_grid, max_degree_grid):
        """
        Fit every grid cell and keep the best GCV R-squared.

        One forward pass per degree at the largest term budget is
        truncated for smaller budgets.
        """
        points = np.asarray(points, dtype=float)
        responses = np.asarray(responses, dtype=float)
        n = len(responses)
        total = float(np.sum((responses - responses.mean()) ** 2))
        null_gcv = self.gcv(total, n, 1)

        best = None
        largest = max(max_terms_grid)
        for max_degree in sorted(max_degree_grid):
            full = self.forward(points, responses, largest, max_degree)
            for max_terms in sorted(max_terms_grid):
                basis = full[:max_terms]
                pruned, coefficients, gcv = self.prune(
                    points, responses, basis
                )
                if null_gcv > 0 and np.isfinite(null_gcv):
                    score = 1.0 - gcv / null_gcv
                else:
                    score = 1.0 if gcv <= 0 else -np.inf

                log.debug(
                    'MARS max_terms=%d max_degree=%d: %d terms, '
                    'GCV R2 %.6g',
                    max_terms, max_degree, len(pruned), score
                )
                if best is None or score > best[0]:
                    best = (score, MarsModel(
                        pruned, coefficients, gcv=gcv,
                        max_terms=max_terms, max_degree=max_degree
                    ))

        return best[1]
