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

import copy
import itertools
import logging
import math
import warnings

import numpy as np

from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from sfd_utils.core import (
    DesignSpace,
    from_unit_cube,
    to_unit_cube
)
from sfd_utils.exceptions import (
    ConstraintWarning,
    CoverageWarning,
    InvalidParameterError,
    ModelFormatError,
    RankWarning,
    ShapeError
)
from sfd_utils.geometry import SimplexLocator
from sfd_utils.gp import GaussianProcess, estimate_hyperparameters
from sfd_utils.mars import MarsFitter, MarsModel

log = logging.getLogger('sfd_utils.surrogates')

SURROGATE_KINDS = ('rsm', 'mars', 'lshep', 'delaunay', 'gp')
MODEL_FORMAT = 'sfd-utils-model'
MODEL_VERSION = 1
PREDICT_CHUNK = 512

default_options = {
    'gp': {
        'nugget_floor': 1e-12,
        'nugget_ceiling': 1.0,
        'lengthscale_bounds': [1e-3, 1e3],
        'restarts': 5,
        'local_neighborhood': 50,
        'local_threshold': 2000,
        'estimate_nugget': True,
        'hyper_subset': 500
    },
    'mars': {
        'max_terms_grid': [21, 41, 61],
        'max_degree_grid': [1, 2, 3],
        'penalty': 3.0,
        'max_knots': 20,
        'threshold': 1e-4
    },
    'lshep': {
        'radius_multiplier': 1.0
    }
}


class SurrogateSpec(object):
    """
    Surrogate kind plus the option groups of the tunable kinds.

    Missing options fall back to ``default_options``.
    """
    def __init__(self, kind, gp=None, mars=None, lshep=None):
        if kind not in SURROGATE_KINDS + ('oracle',):
            raise InvalidParameterError(
                'Unknown surrogate kind {0!r}, expected one of {1}.'.format(
                    kind, ', '.join(SURROGATE_KINDS)
                )
            )

        self.kind = kind
        self.gp = _merged('gp', gp)
        self.mars = _merged('mars', mars)
        self.lshep = _merged('lshep', lshep)

        low, high = self.gp['lengthscale_bounds']
        if not 0 < low < high:
            raise InvalidParameterError(
                'Lengthscale bounds need 0 < lo < hi.'
            )
        if not 0 < self.gp['nugget_floor'] <= self.gp['nugget_ceiling']:
            raise InvalidParameterError(
                'Nugget floor must be positive and below the ceiling.'
            )
        if not self.mars['max_terms_grid'] or \
                not self.mars['max_degree_grid']:
            raise InvalidParameterError('MARS tuning grids must be nonempty.')
        if self.lshep['radius_multiplier'] <= 0:
            raise InvalidParameterError('Radius multiplier must be positive.')

    @classmethod
    def from_options(cls, kind, options=None):
        options = options or {}
        return cls(
            kind,
            gp=options.get('gp'),
            mars=options.get('mars'),
            lshep=options.get('lshep')
        )


def _merged(group, values):
    merged = copy.deepcopy(default_options[group])
    unknown = set(values or {}) - set(merged)
    if unknown:
        raise InvalidParameterError(
            'Unknown {0} options: {1}.'.format(group, ', '.join(sorted(unknown)))
        )
    merged.update(values or {})
    return merged


def minimum_points(kind, dim):
    """
    Smallest training set a kind accepts.
    """
    return {
        'rsm': 2,
        'mars': 10,
        'lshep': dim + 2,
        'delaunay': dim + 1,
        'gp': 5,
        'oracle': 1
    }[kind]


class FittedSurrogate(object):
    """
    Fitted model of one kind behind the common predict contract.

    Training points are held in unit-cube coordinates next to the raw
    responses. Kind specific state lives in ``parameters``.
    """
    def __init__(self, kind, space, points, responses, parameters,
                 flags=None):
        self.kind = kind
        self.space = space
        self.points = np.asarray(points, dtype=float)
        self.responses = np.asarray(responses, dtype=float)
        self.parameters = parameters
        self.flags = flags or {}
        self._engine = None

    @property
    def engine(self):
        """
        Lazily built prediction helper (simplex locator or GP).
        """
        if self._engine is None:
            if self.kind == 'delaunay':
                self._engine = SimplexLocator(self.points)
            elif self.kind == 'gp':
                self._engine = GaussianProcess(
                    self.points,
                    self._gp_centered(),
                    self.parameters['theta'],
                    self.parameters['nugget'],
                    local_neighborhood=self.parameters['local_neighborhood'],
                    local_threshold=self.parameters['local_threshold']
                )
            elif self.kind == 'mars':
                self._engine = MarsModel(
                    self.parameters['basis'],
                    self.parameters['coefficients']
                )
        return self._engine

    def _gp_centered(self):
        low = self.parameters['response_low']
        span = self.parameters['response_span']
        return (self.responses - low) / span - \
            self.parameters['response_mean']

    def predict_unit(self, unit_queries):
        """
        Predictions with extrapolation flags and hull distances.
        """
        unit_queries = np.atleast_2d(np.asarray(unit_queries, dtype=float))
        count = len(unit_queries)
        extrapolated = np.zeros(count, dtype=bool)
        distances = np.zeros(count)
        if count == 0:
            return np.zeros(0), extrapolated, distances

        if self.kind == 'rsm':
            values = rsm_matrix(
                self.parameters['terms'], unit_queries
            ) @ self.parameters['coefficients']
        elif self.kind == 'mars':
            values = self.engine.predict(unit_queries)
        elif self.kind == 'lshep':
            values = _lshep_predict(self, unit_queries)
        elif self.kind == 'delaunay':
            values = np.empty(count)
            for row, query in enumerate(unit_queries):
                simplex = self.engine.locate(query)
                values[row] = simplex.weights @ \
                    self.responses[simplex.vertex_indices]
                extrapolated[row] = simplex.extrapolated
                distances[row] = simplex.projection_distance
        elif self.kind == 'gp':
            normalized = self.engine.predict(unit_queries) + \
                self.parameters['response_mean']
            values = normalized * self.parameters['response_span'] + \
                self.parameters['response_low']
        else:
            values = np.asarray(
                self.parameters['truth'](
                    from_unit_cube(self.space, unit_queries)
                ),
                dtype=float
            )

        return np.asarray(values, dtype=float), extrapolated, distances

    def to_dict(self):
        if self.kind == 'oracle':
            raise ModelFormatError('Oracle models cannot be serialized.')

        parameters = {}
        for key, value in self.parameters.items():
            if isinstance(value, np.ndarray):
                value = value.tolist()
            parameters[key] = value

        return {
            'format': MODEL_FORMAT,
            'version': MODEL_VERSION,
            'kind': self.kind,
            'space': self.space.to_dict(),
            'training': {
                'points': self.points.tolist(),
                'responses': self.responses.tolist()
            },
            'parameters': parameters,
            'flags': self.flags
        }

    @classmethod
    def from_dict(cls, data):
        if data.get('format') != MODEL_FORMAT:
            raise ModelFormatError('Not an sfd-utils model file.')
        if data.get('version') != MODEL_VERSION:
            raise ModelFormatError(
                'Unsupported model file version {0}.'.format(
                    data.get('version')
                )
            )

        kind = data['kind']
        parameters = dict(data['parameters'])
        for key in _ARRAY_PARAMETERS.get(kind, ()):
            parameters[key] = np.asarray(parameters[key], dtype=float)
        if kind == 'rsm':
            parameters['terms'] = [tuple(t) for t in parameters['terms']]

        return cls(
            kind,
            DesignSpace.from_dict(data['space']),
            data['training']['points'],
            data['training']['responses'],
            parameters,
            flags=data.get('flags')
        )


_ARRAY_PARAMETERS = {
    'rsm': ('coefficients',),
    'mars': ('coefficients',),
    'lshep': ('gradients', 'radii'),
    'gp': ('theta',),
}


def _training(data):
    return np.asarray(data.design.points), np.asarray(data.responses)


def rsm_terms(active):
    """
    Full quadratic term pool over the active factors.

    Intercept, linear terms, two-way interactions, then squares.
    """
    terms = [()]
    terms.extend((i,) for i in active)
    terms.extend(itertools.combinations(active, 2))
    terms.extend((i, i) for i in active)
    return terms


def rsm_matrix(terms, points):
    points = np.atleast_2d(points)
    matrix = np.ones((len(points), len(terms)))
    for column, term in enumerate(terms):
        for factor in term:
            matrix[:, column] *= points[:, factor]
    return matrix


def _least_squares(matrix, responses):
    coefficients, _, rank, _ = np.linalg.lstsq(matrix, responses, rcond=None)
    residual = responses - matrix @ coefficients
    return coefficients, float(residual @ residual), rank


def fit_rsm(data, spec=None):
    """
    Second order polynomial with backward BIC elimination.

    Terms on factors with a single observed value are never offered.
    The intercept is never removed.
    """
    points, responses = _training(data)
    n = len(responses)
    active = [
        k for k in range(points.shape[1])
        if len(np.unique(points[:, k])) > 1
    ]
    terms = rsm_terms(active)
    floor = 1e-20 * max(float(responses @ responses), np.finfo(float).tiny)

    def bic(subset):
        rss = _least_squares(rsm_matrix(subset, points), responses)[1]
        return n * np.log(max(rss, floor) / n) + len(subset) * np.log(n)

    current = list(terms)
    score = bic(current)
    path = [score]
    while len(current) > 1:
        trials = [
            (bic(current[:i] + current[i + 1:]), i)
            for i in range(1, len(current))
        ]
        best_score, index = min(trials)
        if not best_score < score:
            break
        log.debug('RSM drops term %s, BIC %.6g', current[index], best_score)
        current.pop(index)
        score = best_score
        path.append(score)

    matrix = rsm_matrix(current, points)
    coefficients, _, rank = _least_squares(matrix, responses)
    flags = {'rank_deficient': bool(rank < len(current))}
    if flags['rank_deficient']:
        warnings.warn(
            'RSM design matrix has rank {0} for {1} terms; fitted on the '
            'pseudo-inverse.'.format(rank, len(current)),
            RankWarning
        )

    return FittedSurrogate(
        'rsm',
        data.space,
        points,
        responses,
        {
            'terms': current,
            'coefficients': coefficients,
            'bic_path': [float(value) for value in path]
        },
        flags=flags
    )


def fit_mars(data, spec):
    points, responses = _training(data)
    options = spec.mars
    fitter = MarsFitter(
        penalty=options['penalty'],
        threshold=options['threshold'],
        max_knots=options['max_knots']
    )
    model = fitter.fit(
        points,
        responses,
        options['max_terms_grid'],
        options['max_degree_grid']
    )

    return FittedSurrogate(
        'mars',
        data.space,
        points,
        responses,
        {
            'basis': [[list(h) for h in hinges] for hinges in model.basis],
            'coefficients': model.coefficients,
            'gcv': float(model.gcv),
            'max_terms': model.max_terms,
            'max_degree': model.max_degree
        }
    )


def _neighbors(tree, points, index, count):
    """
    The count nearest other points plus any tied at the cutoff.

    Returned sorted by (distance, index).
    """
    distances, indices = tree.query(points[index], k=count + 1)
    others = [
        (d, i) for d, i in zip(distances, indices) if i != index
    ][:count]
    cutoff = others[-1][0]
    ball = tree.query_ball_point(
        points[index], r=cutoff * (1 + 1e-12) + 1e-15
    )
    found = sorted(
        (float(np.linalg.norm(points[i] - points[index])), int(i))
        for i in ball if i != index
    )
    return (
        np.array([i for _, i in found]),
        np.array([d for d, _ in found])
    )


def fit_lshep(data, spec):
    """
    Local weighted linear fits with compactly supported radii.
    """
    points, responses = _training(data)
    n, dim = points.shape
    if n < dim + 2:
        raise InvalidParameterError(
            'Linear Shepard needs at least {0} points.'.format(dim + 2)
        )

    count = min(n - 1, 3 * (dim + 1))
    radius_rank = int(math.ceil(3 * (dim + 1) / 2.0))
    multiplier = spec.lshep['radius_multiplier']

    design = np.column_stack([np.ones(n), points])
    global_gradient = np.linalg.lstsq(design, responses, rcond=None)[0][1:]

    tree = cKDTree(points)
    gradients = np.empty((n, dim))
    radii = np.empty(n)
    fallback = 0
    for index in range(n):
        neighbors, distances = _neighbors(tree, points, index, count)
        radii[index] = multiplier * distances[
            min(radius_rank, len(distances)) - 1
        ]

        positive = distances > 0
        neighbors, distances = neighbors[positive], distances[positive]
        gradient = None
        if len(neighbors) >= dim:
            reach = 1.1 * distances.max()
            weights = (reach - distances) / (reach * distances)
            offsets = points[neighbors] - points[index]
            change = responses[neighbors] - responses[index]
            solution, _, rank, _ = np.linalg.lstsq(
                weights[:, None] * offsets, weights * change, rcond=None
            )
            if rank == dim:
                gradient = solution

        if gradient is None:
            gradient = global_gradient
            fallback += 1
        gradients[index] = gradient

    if fallback:
        log.debug('Linear Shepard used the global fit at %d points', fallback)

    return FittedSurrogate(
        'lshep',
        data.space,
        points,
        responses,
        {'gradients': gradients, 'radii': radii},
        flags={'global_fallbacks': fallback}
    )


def _lshep_predict(model, queries):
    points = model.points
    responses = model.responses
    gradients = model.parameters['gradients']
    radii = model.parameters['radii']
    anchors = responses - np.sum(points * gradients, axis=1)

    values = np.empty(len(queries))
    uncovered = 0
    for start in range(0, len(queries), PREDICT_CHUNK):
        block = queries[start:start + PREDICT_CHUNK]
        distances = cdist(block, points)
        local = block @ gradients.T + anchors[None, :]

        with np.errstate(divide='ignore', invalid='ignore'):
            weights = (
                np.maximum(0.0, radii - distances) / (radii * distances)
            ) ** 2
        weights = np.nan_to_num(weights, nan=0.0, posinf=0.0)
        exact = distances <= 1e-14
        weights[exact] = 0.0

        totals = weights.sum(axis=1)
        with np.errstate(divide='ignore', invalid='ignore'):
            block_values = np.sum(weights * local, axis=1) / totals

        nearest = np.argmin(distances, axis=1)
        rows = np.arange(len(block))
        empty = totals <= 0
        uncovered += int(np.sum(empty & ~exact.any(axis=1)))
        block_values[empty] = local[rows[empty], nearest[empty]]

        hits = exact.any(axis=1)
        block_values[hits] = responses[np.argmax(exact[hits], axis=1)]
        values[start:start + PREDICT_CHUNK] = block_values

    if uncovered:
        warnings.warn(
            '{0} queries lie outside every Shepard radius; the nearest '
            'local fit was used.'.format(uncovered),
            CoverageWarning
        )
    return values


def fit_delaunay(data, spec=None):
    points, responses = _training(data)
    model = FittedSurrogate('delaunay', data.space, points, responses, {})
    model._engine = SimplexLocator(points)
    return model


def fit_gp(data, spec, seed=0):
    """
    GP on inputs in the unit cube and responses scaled to [0, 1].

    Hyperparameters come from a deterministic subsample when the
    training set exceeds hyper_subset points.
    """
    points, responses = _training(data)
    options = spec.gp
    n = len(responses)

    low = float(responses.min())
    span = float(responses.max()) - low or 1.0
    normalized = (responses - low) / span
    mean = float(normalized.mean())
    centered = normalized - mean

    subset = np.arange(n)
    if n > options['hyper_subset']:
        rng = np.random.default_rng([seed, n])
        subset = np.sort(
            rng.choice(n, options['hyper_subset'], replace=False)
        )

    theta, nugget = estimate_hyperparameters(
        points[subset],
        centered[subset],
        lengthscale_bounds=options['lengthscale_bounds'],
        nugget_bounds=(options['nugget_floor'], options['nugget_ceiling']),
        restarts=options['restarts'],
        estimate_nugget=options['estimate_nugget'],
        seed=seed
    )

    process = GaussianProcess(
        points,
        centered,
        theta,
        nugget,
        local_neighborhood=options['local_neighborhood'],
        local_threshold=options['local_threshold']
    )
    log.debug('GP theta %s nugget %g', np.round(theta, 6).tolist(),
              process.nugget)

    model = FittedSurrogate(
        'gp',
        data.space,
        points,
        responses,
        {
            'theta': theta,
            'nugget': float(process.nugget),
            'sigma2': process.sigma2,
            'eta': process.eta,
            'response_low': low,
            'response_span': span,
            'response_mean': mean,
            'local_neighborhood': options['local_neighborhood'],
            'local_threshold': options['local_threshold']
        }
    )
    model._engine = process
    return model


def fit_oracle(data, truth):
    """
    Predictor that evaluates the truth itself, for harness self checks.
    """
    points, responses = _training(data)
    return FittedSurrogate(
        'oracle', data.space, points, responses, {'truth': truth}
    )


def fit(data, spec, seed=0, truth=None):
    """
    Fit the surrogate named by spec.kind.
    """
    minimum = minimum_points(spec.kind, data.space.dim)
    if data.n < minimum:
        raise InvalidParameterError(
            '{0} needs at least {1} training points, got {2}.'.format(
                spec.kind, minimum, data.n
            )
        )

    if spec.kind == 'rsm':
        return fit_rsm(data, spec)
    if spec.kind == 'mars':
        return fit_mars(data, spec)
    if spec.kind == 'lshep':
        return fit_lshep(data, spec)
    if spec.kind == 'delaunay':
        return fit_delaunay(data, spec)
    if spec.kind == 'gp':
        return fit_gp(data, spec, seed=seed)
    return fit_oracle(data, truth)


def _unit_queries(model, queries):
    queries = np.asarray(queries, dtype=float)
    if queries.size == 0:
        return np.zeros((0, model.space.dim))

    queries = np.atleast_2d(queries)
    if queries.shape[1] != model.space.dim:
        raise ShapeError(
            'Queries have {0} columns, model expects {1}.'.format(
                queries.shape[1], model.space.dim
            )
        )

    violations = int(np.sum(~model.space.feasible_mask(queries)))
    if violations:
        warnings.warn(
            '{0} queries violate the space constraints.'.format(violations),
            ConstraintWarning
        )
    return to_unit_cube(model.space, queries)


def predict_with_extrapolation(model, queries):
    """
    Predictions at natural-scale queries with extrapolation details.
    """
    return model.predict_unit(_unit_queries(model, queries))


def predict(model, queries):
    return predict_with_extrapolation(model, queries)[0]
