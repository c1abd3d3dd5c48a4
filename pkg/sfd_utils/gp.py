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
Gaussian process regression with a separable Gaussian kernel.

The covariance is sigma2 * (R + g I) with
R_ij = exp(-sum_k (x_ik - x_jk)^2 / theta_k). The variance sigma2 is
profiled out of the likelihood; theta and the relative nugget g are
searched on the log scale.
"""

import logging

import numpy as np

from scipy.linalg import LinAlgError, cho_solve, cholesky
from scipy.optimize import minimize
from scipy.spatial import cKDTree

from sfd_utils.exceptions import NumericalError

log = logging.getLogger('sfd_utils.gp')

MAX_NUGGET_DOUBLINGS = 8
_FAILED_FIT = 1e25


def correlation(first, second, theta):
    gaps = (first[:, None, :] - second[None, :, :]) ** 2
    return np.exp(-np.sum(gaps / theta, axis=2))


def stable_cholesky(matrix, nugget):
    """
    Lower Cholesky factor of matrix + nugget I.

    The nugget doubles on failure, up to 8 times.
    """
    identity = np.eye(len(matrix))
    for attempt in range(MAX_NUGGET_DOUBLINGS + 1):
        try:
            return cholesky(matrix + nugget * identity, lower=True), nugget
        except LinAlgError:
            log.debug('Cholesky failed with nugget %g, doubling', nugget)
            nugget *= 2.0

    raise NumericalError(
        'Covariance matrix is not positive definite after {0} nugget '
        'doublings.'.format(MAX_NUGGET_DOUBLINGS)
    )


def profile_log_likelihood(points, responses, log_theta, log_nugget):
    """
    Profile log likelihood and its gradient.

    The gradient is taken with respect to (log theta_1..d, log g).
    Constant terms are dropped.
    """
    n, dim = points.shape
    theta = np.exp(log_theta)
    nugget = float(np.exp(log_nugget))

    matrix = correlation(points, points, theta)
    factor = cholesky(
        matrix + nugget * np.eye(n), lower=True
    )
    alpha = cho_solve((factor, True), responses)
    sigma2 = max(float(responses @ alpha) / n, 1e-300)
    value = -0.5 * n * np.log(sigma2) - np.sum(np.log(np.diag(factor)))

    inverse = cho_solve((factor, True), np.eye(n))
    gradient = np.empty(dim + 1)
    for k in range(dim):
        gaps = (points[:, k][:, None] - points[:, k][None, :]) ** 2
        derivative = matrix * gaps / theta[k]
        gradient[k] = -0.5 * np.sum(inverse * derivative) + \
            0.5 * (alpha @ derivative @ alpha) / sigma2
    gradient[dim] = -0.5 * nugget * np.trace(inverse) + \
        0.5 * nugget * (alpha @ alpha) / sigma2

    return float(value), gradient


def _objective(parameters, points, responses, fixed_nugget):
    dim = points.shape[1]
    log_theta = parameters[:dim]
    if fixed_nugget is None:
        log_nugget = parameters[dim]
    else:
        log_nugget = np.log(fixed_nugget)

    try:
        value, gradient = profile_log_likelihood(
            points, responses, log_theta, log_nugget
        )
    except (LinAlgError, ValueError):
        return _FAILED_FIT, np.zeros_like(parameters)

    if not np.isfinite(value):
        return _FAILED_FIT, np.zeros_like(parameters)

    if fixed_nugget is not None:
        gradient = gradient[:dim]
    return -value, -gradient


def estimate_hyperparameters(
    points,
    responses,
    lengthscale_bounds=(1e-3, 1e3),
    nugget_bounds=(1e-10, 1.0),
    restarts=5,
    estimate_nugget=True,
    seed=0
):
    """
    Maximum likelihood (theta, g) by multi-start L-BFGS-B.

    Starts are log-uniform within the bounds. The best likelihood wins,
    ties go to the earliest start.
    """
    dim = points.shape[1]
    rng = np.random.default_rng(seed)
    low, high = np.log(lengthscale_bounds)
    bounds = [(low, high)] * dim
    fixed_nugget = None
    if estimate_nugget:
        bounds.append(tuple(np.log(nugget_bounds)))
    else:
        fixed_nugget = nugget_bounds[0]

    lower = np.array([b[0] for b in bounds])
    upper = np.array([b[1] for b in bounds])

    best = None
    for start in range(max(1, restarts)):
        initial = lower + rng.random(len(bounds)) * (upper - lower)
        result = minimize(
            _objective,
            initial,
            args=(points, responses, fixed_nugget),
            jac=True,
            method='L-BFGS-B',
            bounds=bounds
        )
        log.debug('GP restart %d: negative log likelihood %g', start,
                  result.fun)
        if best is None or result.fun < best.fun:
            best = result

    theta = np.exp(best.x[:dim])
    nugget = fixed_nugget if fixed_nugget is not None else \
        float(np.exp(best.x[dim]))
    return theta, nugget


def gp_posterior_mean(points, responses, queries, theta, sigma2, eta):
    """
    Posterior mean of a zero-mean GP with raw hyperparameters.

    Uses covariance sigma2 * R + eta I without any normalization.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    queries = np.atleast_2d(np.asarray(queries, dtype=float))
    theta = np.broadcast_to(np.asarray(theta, dtype=float),
                            (points.shape[1],))

    matrix = sigma2 * correlation(points, points, theta)
    matrix[np.diag_indices_from(matrix)] += eta
    factor = cholesky(matrix, lower=True)
    alpha = cho_solve((factor, True), np.asarray(responses, dtype=float))
    return sigma2 * correlation(queries, points, theta) @ alpha


class GaussianProcess(object):
    """
    Zero-mean GP on centered [0, 1] normalized responses.

    Above local_threshold points, predictions use a GP on the
    local_neighborhood nearest training points for each query.
    """
    def __init__(
        self,
        points,
        centered,
        theta,
        nugget,
        local_neighborhood=None,
        local_threshold=2000
    ):
        self.points = np.asarray(points, dtype=float)
        self.centered = np.asarray(centered, dtype=float)
        self.theta = np.asarray(theta, dtype=float)
        self.local_neighborhood = local_neighborhood
        self.local_threshold = local_threshold
        self.tree = None

        if self.is_local:
            self.nugget = nugget
            self.alpha = None
            self.sigma2 = None
            self.tree = cKDTree(self.points)
        else:
            matrix = correlation(self.points, self.points, self.theta)
            factor, self.nugget = stable_cholesky(matrix, nugget)
            self.alpha = cho_solve((factor, True), self.centered)
            self.sigma2 = float(self.centered @ self.alpha) / len(self.points)

    @property
    def is_local(self):
        return bool(
            self.local_neighborhood and
            len(self.points) > self.local_threshold
        )

    @property
    def eta(self):
        if self.sigma2 is None:
            return None
        return self.sigma2 * self.nugget

    def predict(self, queries):
        queries = np.atleast_2d(np.asarray(queries, dtype=float))
        if len(queries) == 0:
            return np.zeros(0)

        if not self.is_local:
            return correlation(queries, self.points, self.theta) @ self.alpha

        size = min(self.local_neighborhood, len(self.points))
        _, neighbors = self.tree.query(queries, k=size)
        neighbors = np.atleast_2d(neighbors)
        means = np.empty(len(queries))
        for row, query in enumerate(queries):
            local = self.points[neighbors[row]]
            matrix = correlation(local, local, self.theta)
            factor, _ = stable_cholesky(matrix, self.nugget)
            alpha = cho_solve((factor, True), self.centered[neighbors[row]])
            means[row] = (
                correlation(query[None, :], local, self.theta) @ alpha
            )[0]
        return means
