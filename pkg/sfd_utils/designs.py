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

import itertools
import logging

import numpy as np

from collections import namedtuple
from scipy.spatial.distance import pdist, squareform

from sfd_utils.core import Design, from_unit_cube, to_unit_cube
from sfd_utils.exceptions import (
    BinningError,
    CriterionOverflow,
    EmptyDesignError,
    InfeasibleRegionError,
    InvalidParameterError
)

log = logging.getLogger('sfd_utils.designs')

GENERATOR_KINDS = (
    'grid', 'uniform', 'lhd', 'maximin_lhd', 'maxpro', 'maxent'
)
DISTANCE_KINDS = ('lhd', 'maximin_lhd', 'maxpro', 'maxent')
MAX_OVERSAMPLE = 10
MAX_BINNING_ATTEMPTS = 100

# Pairwise terms are capped so annealing deltas stay finite.
_TERM_CAP = 1e250
_SWAP_PROBABILITY = 0.8
_COOLING_STEPS = 1000
_ENTROPY_REFRESH = 500
_ENTROPY_JITTER = 1e-10

augmentation_report = namedtuple(
    'augmentation_report',
    ['requested_aug', 'n_a', 'oversample_factor']
)

default_anneal = {
    'iterations_per_point': 10000,
    'max_iterations': None,
    'initial_temperature': 0.1,
    'cooling_rate': 0.995
}

# Run configs cap the search so desk-scale benches finish in minutes.
DESK_MAX_ITERATIONS = 5000


class CriterionParams(object):
    """
    Settings for the design criteria and their annealing search.

    m defaults to twice the dimension when left unset.
    """
    def __init__(self, m=None, s=2.0, a=0.5, anneal=None, step_size=0.1):
        self.m = m
        self.s = float(s)
        self.a = float(a)
        self.step_size = float(step_size)
        self.anneal = dict(default_anneal)
        self.anneal.update(anneal or {})

        if m is not None and int(m) < 1:
            raise InvalidParameterError('Criterion exponent m must be >= 1.')
        if self.s <= 0:
            raise InvalidParameterError('Distance power s must be positive.')
        if self.a <= 0:
            raise InvalidParameterError('Variogram range a must be positive.')
        if not 0 < self.anneal['cooling_rate'] <= 1:
            raise InvalidParameterError('Cooling rate must be in (0, 1].')
        if self.anneal['initial_temperature'] < 0:
            raise InvalidParameterError(
                'Initial temperature must be non-negative.'
            )

    def exponent(self, dim):
        return int(self.m) if self.m is not None else 2 * dim

    def iterations(self, n):
        total = int(self.anneal['iterations_per_point'] * n)
        cap = self.anneal['max_iterations']
        if cap is None:
            return total
        return min(total, int(cap))


class GeneratorSpec(object):
    """
    Generator kind with its size, criterion settings and seed.
    """
    def __init__(self, kind, size=None, params=None, seed=0, levels=None):
        if kind not in GENERATOR_KINDS:
            raise InvalidParameterError(
                'Unknown design kind {0!r}, expected one of {1}.'.format(
                    kind, ', '.join(GENERATOR_KINDS)
                )
            )

        if kind == 'grid':
            if levels is None:
                raise InvalidParameterError(
                    'Grid designs need levels per factor.'
                )
        elif size is None or size < 1:
            raise InvalidParameterError('Design size must be >= 1.')
        elif kind in DISTANCE_KINDS and size < 2:
            raise InvalidParameterError(
                '{0} designs need at least 2 points.'.format(kind)
            )

        if seed is None or int(seed) < 0:
            raise InvalidParameterError('Seed must be a non-negative integer.')

        self.kind = kind
        self.size = size
        self.params = params or CriterionParams()
        self.seed = int(seed)
        self.levels = levels


def _as_points(design):
    if isinstance(design, Design):
        return np.asarray(design.points)
    return np.atleast_2d(np.asarray(design, dtype=float))


def phi_m(design, m=2, s=2.0):
    """
    Inverse-distance maximin criterion, smaller is better.

    Computed as (sum over pairs of d^-m)^(1/m) with d the s-norm
    distance. Duplicated points raise CriterionOverflow.
    """
    points = _as_points(design)
    if len(points) < 2:
        raise InvalidParameterError('phi_m needs at least 2 points.')

    distances = pdist(points, 'minkowski', p=s)
    smallest = distances.min()
    if smallest == 0:
        raise CriterionOverflow('Design has duplicated points.')

    value = (np.sum((smallest / distances) ** m) ** (1.0 / m)) / smallest
    if not np.isfinite(value):
        raise CriterionOverflow('phi_m is not finite.')
    return float(value)


def maxpro_criterion(design):
    """
    Sum over pairs of 1 / prod_k (x_ik - x_jk)^2.
    """
    points = _as_points(design)
    if len(points) < 2:
        raise InvalidParameterError('MaxPro needs at least 2 points.')

    log_products = np.zeros(len(points) * (len(points) - 1) // 2)
    for column in points.T:
        gaps = pdist(column[:, None], 'sqeuclidean')
        if np.any(gaps == 0):
            raise CriterionOverflow(
                'Two points share a coordinate value, '
                'MaxPro criterion is infinite.'
            )
        log_products += np.log(gaps)

    with np.errstate(over='ignore'):
        value = np.sum(np.exp(-log_products))

    if not np.isfinite(value):
        raise CriterionOverflow('MaxPro criterion is not finite.')
    return float(value)


def spherical_correlation(distances, a):
    """
    Spherical correlation 1 - 1.5h + 0.5h^3 for h = d/a <= 1, else 0.
    """
    h = np.asarray(distances, dtype=float) / a
    return np.where(h <= 1.0, 1.0 - 1.5 * h + 0.5 * h ** 3, 0.0)


def _entropy_matrix(points, a):
    matrix = spherical_correlation(squareform(pdist(points)), a)
    matrix[np.diag_indices_from(matrix)] = 1.0 + _ENTROPY_JITTER
    return matrix


def maxent_objective(design, a=0.5):
    """
    Log absolute determinant of the spherical correlation matrix.

    Larger is better. The diagonal carries a 1e-10 jitter.
    """
    points = _as_points(design)
    if len(points) < 2:
        raise InvalidParameterError('MaxEnt needs at least 2 points.')

    sign, logdet = np.linalg.slogdet(_entropy_matrix(points, a))
    if sign == 0 or not np.isfinite(logdet):
        raise CriterionOverflow('Correlation determinant is not finite.')
    return float(logdet)


class _Annealer(object):
    """
    Simulated annealing over designs with best-so-far tracking.

    Subclasses propose a move returning the objective change and a
    payload, and commit accepted payloads. The objective is minimized.
    """
    def __init__(self, points, params, rng):
        self.points = np.array(points, dtype=float)
        self.n, self.dim = self.points.shape
        self.params = params
        self.rng = rng
        self.value = self.initial_value()

    def initial_value(self):
        raise NotImplementedError

    def propose(self):
        raise NotImplementedError

    def commit(self, payload, delta):
        raise NotImplementedError

    def run(self, iterations):
        schedule = self.params.anneal
        scale = abs(self.value) or 1.0
        temperature = schedule['initial_temperature'] * scale
        cool_every = max(1, iterations // _COOLING_STEPS)

        best_value = self.value
        best_points = self.points.copy()
        accepted = 0

        for step in range(1, iterations + 1):
            proposal = self.propose()
            if proposal is not None:
                delta, payload = proposal
                if delta <= 0 or (
                    temperature > 0 and
                    self.rng.random() < np.exp(-delta / temperature)
                ):
                    self.commit(payload, delta)
                    accepted += 1
                    if self.value < best_value:
                        best_value = self.value
                        best_points = self.points.copy()

            if step % cool_every == 0:
                temperature *= schedule['cooling_rate']

        log.debug(
            '%s: %d iterations, %d accepted, objective %g',
            type(self).__name__, iterations, accepted, best_value
        )
        return best_points


class _LatinAnnealer(_Annealer):
    """
    Annealer for pairwise criteria over Latin hypercube designs.

    Moves are within-column swaps and within-cell re-jitters, both of
    which keep the Latin property. Pair terms are held in an n x n
    matrix updated one or two rows at a time.
    """
    def pair_terms(self, rows, points):
        raise NotImplementedError

    def initial_value(self):
        terms = np.zeros((self.n, self.n))
        for row in range(self.n):
            terms[row] = self._row_terms([row], self.points)[0]
        self.terms = terms
        return float(terms.sum() / 2)

    def _row_terms(self, rows, points):
        with np.errstate(divide='ignore', over='ignore'):
            terms = self.pair_terms(rows, points)
        terms = np.minimum(terms, _TERM_CAP)
        terms[np.arange(len(rows)), rows] = 0.0
        return terms

    def propose(self):
        column = self.rng.integers(self.dim)
        if self.rng.random() < _SWAP_PROBABILITY:
            first, second = self.rng.choice(self.n, 2, replace=False)
            rows = [int(first), int(second)]
            candidate = self.points.copy()
            candidate[rows, column] = candidate[rows[::-1], column]
        else:
            row = int(self.rng.integers(self.n))
            rows = [row]
            candidate = self.points.copy()
            cell = min(int(candidate[row, column] * self.n), self.n - 1)
            candidate[row, column] = (cell + self.rng.random()) / self.n

        new_terms = self._row_terms(rows, candidate)
        removed = self.terms[rows].sum() - \
            self.terms[np.ix_(rows, rows)].sum() / 2
        added = new_terms.sum() - new_terms[:, rows].sum() / 2
        return added - removed, (rows, candidate, new_terms)

    def commit(self, payload, delta):
        rows, candidate, new_terms = payload
        self.points = candidate
        self.terms[rows, :] = new_terms
        self.terms[:, rows] = new_terms.T
        self.value += delta


class _MaximinAnnealer(_LatinAnnealer):
    def pair_terms(self, rows, points):
        m = self.params.exponent(self.dim)
        gaps = np.abs(points[rows][:, None, :] - points[None, :, :])
        distances = np.sum(gaps ** self.params.s, axis=2) ** (
            1.0 / self.params.s
        )
        return distances ** (-float(m))


class _MaxProAnnealer(_LatinAnnealer):
    def pair_terms(self, rows, points):
        gaps = (points[rows][:, None, :] - points[None, :, :]) ** 2
        return 1.0 / np.prod(gaps, axis=2)


class _EntropyAnnealer(_Annealer):
    """
    Annealer maximizing log |det R| by single coordinate moves.

    The inverse of R is maintained so each proposal costs O(n^2) via
    the Schur complement of the moved row.
    """
    def initial_value(self):
        self._refresh()
        return -self.logdet

    def _refresh(self):
        matrix = _entropy_matrix(self.points, self.params.a)
        sign, logdet = np.linalg.slogdet(matrix)
        if sign == 0 or not np.isfinite(logdet):
            raise CriterionOverflow('Correlation determinant is not finite.')
        self.matrix = matrix
        self.inverse = np.linalg.inv(matrix)
        self.logdet = logdet
        self.accepted = 0

    def propose(self):
        row = int(self.rng.integers(self.n))
        column = int(self.rng.integers(self.dim))
        point = self.points[row].copy()
        point[column] = np.clip(
            point[column] + self.rng.normal(0.0, self.params.step_size),
            0.0,
            1.0
        )

        correlations = spherical_correlation(
            np.sqrt(np.sum((self.points - point) ** 2, axis=1)),
            self.params.a
        )
        correlations[row] = 1.0 + _ENTROPY_JITTER

        others = np.arange(self.n) != row
        pivot = self.inverse[row, row]
        coupling = self.inverse[others, row]
        reduced = self.inverse[np.ix_(others, others)] - \
            np.outer(coupling, coupling) / pivot

        b = correlations[others]
        new_schur = correlations[row] - b @ reduced @ b
        old_schur = 1.0 / pivot
        if new_schur == 0 or not np.isfinite(new_schur):
            return None

        delta = -(np.log(abs(new_schur)) - np.log(abs(old_schur)))
        return delta, (row, point, correlations, reduced, new_schur)

    def commit(self, payload, delta):
        row, point, correlations, reduced, new_schur = payload
        others = np.arange(self.n) != row
        b = correlations[others]
        reduced_b = reduced @ b

        inverse = np.empty_like(self.inverse)
        inverse[np.ix_(others, others)] = reduced + \
            np.outer(reduced_b, reduced_b) / new_schur
        inverse[others, row] = -reduced_b / new_schur
        inverse[row, others] = -reduced_b / new_schur
        inverse[row, row] = 1.0 / new_schur

        self.points[row] = point
        self.matrix[row, :] = correlations
        self.matrix[:, row] = correlations
        self.inverse = inverse
        self.logdet -= delta
        self.value += delta
        self.accepted += 1

        if self.accepted >= _ENTROPY_REFRESH:
            self._refresh()
            self.value = -self.logdet


def _latin_points(n, dim, rng):
    cells = np.argsort(rng.random((n, dim)), axis=0)
    return (cells + rng.random((n, dim))) / n


def _uniform_cube(n, dim, params, rng):
    return rng.random((n, dim))


def _lhd_cube(n, dim, params, rng):
    return _latin_points(n, dim, rng)


def _maximin_cube(n, dim, params, rng):
    annealer = _MaximinAnnealer(_latin_points(n, dim, rng), params, rng)
    return annealer.run(params.iterations(n))


def _maxpro_cube(n, dim, params, rng):
    annealer = _MaxProAnnealer(_latin_points(n, dim, rng), params, rng)
    return annealer.run(params.iterations(n))


def _maxent_cube(n, dim, params, rng):
    annealer = _EntropyAnnealer(rng.random((n, dim)), params, rng)
    return annealer.run(params.iterations(n))


_CUBE_GENERATORS = {
    'uniform': _uniform_cube,
    'lhd': _lhd_cube,
    'maximin_lhd': _maximin_cube,
    'maxpro': _maxpro_cube,
    'maxent': _maxent_cube
}


def gen_grid(space, levels_per_factor):
    """
    Cartesian product of equally spaced levels, constraint filtered.
    """
    levels = np.broadcast_to(
        np.asarray(levels_per_factor, dtype=int), (space.dim,)
    )
    if np.any(levels < 2):
        raise InvalidParameterError('Grid designs need >= 2 levels.')

    axes = [np.linspace(0.0, 1.0, count) for count in levels]
    mesh = np.meshgrid(*axes, indexing='ij')
    points = np.stack([axis.ravel() for axis in mesh], axis=1)
    points = points[space.feasible_mask(from_unit_cube(space, points))]

    if len(points) == 0:
        raise EmptyDesignError('No grid point satisfies the constraints.')

    log.debug('Grid with levels %s has N_g = %d', levels.tolist(), len(points))
    return Design(space, points, 'grid')


def constrain_subset(generator, space, n):
    """
    Oversample on the cube until n feasible points exist.

    Attempt k generates k * n points and keeps a random n-subset of the
    feasible ones, in generation order.
    """
    if n < 1:
        raise InvalidParameterError('Design size must be >= 1.')

    produce = _CUBE_GENERATORS[generator.kind]
    for factor in range(1, MAX_OVERSAMPLE + 1):
        rng = np.random.default_rng([generator.seed, factor])
        points = produce(factor * n, space.dim, generator.params, rng)
        feasible = np.flatnonzero(
            space.feasible_mask(from_unit_cube(space, points))
        )

        if len(feasible) >= n:
            if len(feasible) > n:
                feasible = np.sort(rng.choice(feasible, n, replace=False))

            log.debug(
                '%s design of %d points used oversample factor %d',
                generator.kind, n, factor
            )
            return Design(
                space,
                points[feasible],
                generator.kind,
                seed=generator.seed,
                oversample_factor=factor
            )

    raise InfeasibleRegionError(
        'Fewer than {0} feasible points after oversampling by {1}; '
        'the constraints remove too much of the cube.'.format(
            n, MAX_OVERSAMPLE
        )
    )


def generate(generator, space):
    """
    Build the design described by a GeneratorSpec.
    """
    if generator.kind == 'grid':
        return gen_grid(space, generator.levels)
    return constrain_subset(generator, space, generator.size)


def gen_uniform(space, n, seed, params=None):
    return constrain_subset(
        GeneratorSpec('uniform', n, params, seed), space, n
    )


def gen_lhd(space, n, seed, params=None):
    return constrain_subset(GeneratorSpec('lhd', n, params, seed), space, n)


def gen_maximin_lhd(space, n, params=None, seed=0):
    return constrain_subset(
        GeneratorSpec('maximin_lhd', n, params, seed), space, n
    )


def gen_maxpro(space, n, params=None, seed=0):
    return constrain_subset(
        GeneratorSpec('maxpro', n, params, seed), space, n
    )


def gen_maxent(space, n, params=None, seed=0):
    return constrain_subset(
        GeneratorSpec('maxent', n, params, seed), space, n
    )


def ccd_points(dim):
    """
    Face-centered CCD points on the unit cube.

    Vertices in product order, then the axial points of each axis
    (low face first), then the center.
    """
    vertices = np.array(list(itertools.product([0.0, 1.0], repeat=dim)))
    axial = []
    for axis in range(dim):
        for face in (0.0, 1.0):
            point = np.full(dim, 0.5)
            point[axis] = face
            axial.append(point)

    center = np.full((1, dim), 0.5)
    return np.vstack([vertices, np.array(axial), center])


def ccd_count(space):
    """
    Number of feasible CCD points, the n_a of a budget.
    """
    candidates = ccd_points(space.dim)
    return int(space.feasible_mask(from_unit_cube(space, candidates)).sum())


def ccd_augment(design, space=None):
    """
    Append feasible CCD points not already in the design.
    """
    space = space or design.space
    candidates = ccd_points(space.dim)
    feasible = space.feasible_mask(from_unit_cube(space, candidates))

    existing = {tuple(row) for row in design.points}
    kept = []
    for point, ok in zip(candidates, feasible):
        key = tuple(point)
        if ok and key not in existing:
            existing.add(key)
            kept.append(point)

    report = augmentation_report(
        requested_aug=len(candidates),
        n_a=len(kept),
        oversample_factor=design.oversample_factor
    )
    if not kept:
        return design, report

    augmented = Design(
        space,
        np.vstack([design.points, np.array(kept)]),
        list(design.generators) + ['ccd'] * len(kept),
        augmented=np.concatenate(
            [design.augmented, np.ones(len(kept), dtype=bool)]
        ),
        seed=design.seed,
        oversample_factor=design.oversample_factor
    )
    return augmented, report


def snap_to_levels(values, levels):
    """
    Nearest level per value, ties go to the lower level.
    """
    values = np.asarray(values, dtype=float)
    if len(levels) == 1:
        return np.full_like(values, levels[0])

    upper = np.clip(np.searchsorted(levels, values), 1, len(levels) - 1)
    low = levels[upper - 1]
    high = levels[upper]
    return np.where(high - values < values - low, high, low)


def _snap(space, natural_points):
    return np.column_stack([
        snap_to_levels(natural_points[:, axis], space.levels[axis])
        for axis in range(space.dim)
    ])


def _repair(space, point):
    """
    Cheapest single-factor level change restoring feasibility.

    Cost is the change in unit scale; ties take the lower new value.
    Returns None when no single change works.
    """
    violated = [
        constraint for constraint in space.constraints
        if constraint.slack(point)[0] < -1e-12
    ]
    factors = sorted({
        int(axis) for constraint in violated
        for axis in np.flatnonzero(constraint.coefficients)
    })

    best = None
    for axis in factors:
        for level in space.levels[axis]:
            if level == point[axis]:
                continue
            candidate = point.copy()
            candidate[axis] = level
            if not space.feasible_mask(candidate)[0]:
                continue
            cost = abs(level - point[axis]) / space.width[axis]
            key = (cost, level, axis)
            if best is None or key < best[0]:
                best = (key, candidate)

    return None if best is None else best[1]


def _bin_points(space, natural_points):
    snapped = _snap(space, natural_points)
    feasible = space.feasible_mask(snapped)
    rows = []
    for point, ok in zip(snapped, feasible):
        if not ok:
            point = _repair(space, point)
        rows.append(point)
    return rows


def bin_to_grid(design, space=None, seed=None):
    """
    Snap a design onto the discrete levels of its space.

    Infeasible snapped points are repaired along a constrained factor.
    Duplicates and unrepairable points are replaced with fresh uniform
    draws, snapped the same way, for up to 100 attempts.
    """
    space = space or design.space
    if not space.is_discrete:
        raise InvalidParameterError(
            'Binning needs discrete levels for every factor.'
        )

    seen = set()
    points, generators, augmented = [], [], []
    binned = _bin_points(space, design.natural_points)
    for point, name, flag in zip(binned, design.generators, design.augmented):
        if point is None or tuple(point) in seen:
            continue
        seen.add(tuple(point))
        points.append(point)
        generators.append(name)
        augmented.append(flag)

    missing = design.n - len(points)
    seed = design.seed if seed is None else seed
    rng = np.random.default_rng([seed or 0, design.n])
    for attempt in range(MAX_BINNING_ATTEMPTS):
        if missing <= 0:
            break

        draws = from_unit_cube(space, rng.random((missing, space.dim)))
        for point in _bin_points(space, draws):
            if point is None or tuple(point) in seen:
                continue
            seen.add(tuple(point))
            points.append(point)
            generators.append(design.name)
            augmented.append(False)
            missing -= 1

    if missing > 0:
        raise BinningError(
            'Could not reach {0} distinct feasible grid points in {1} '
            'attempts.'.format(design.n, MAX_BINNING_ATTEMPTS)
        )

    return Design(
        space,
        to_unit_cube(space, np.array(points)),
        generators,
        augmented=augmented,
        seed=design.seed,
        oversample_factor=design.oversample_factor
    )
