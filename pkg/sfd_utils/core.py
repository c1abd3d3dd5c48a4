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

from collections import namedtuple

from sfd_utils.exceptions import (
    BoundsError,
    ConfigurationError,
    DegenerateMetricError,
    InvalidParameterError,
    ShapeError
)

SLACK_TOLERANCE = 1e-12
MAPE_ZERO_GUARD = 1e-8

SFD_GENERATORS = ('uniform', 'lhd', 'maximin_lhd', 'maxpro', 'maxent')

metric_record = namedtuple(
    'metric_record',
    [
        'design_name',
        'surrogate_name',
        'budget',
        'replication',
        'rmse',
        'mape',
        'wall_time_s',
        'failed',
        'n_excluded',
        'extrapolation_rate'
    ]
)


def _frozen(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


class LinearConstraint(object):
    """
    Linear inequality on natural-scale coordinates.

    The constraint holds when ``coefficients . x + offset`` is
    non-negative for sense ``>=`` or non-positive for sense ``<=``.
    """
    senses = ('>=', '<=')

    def __init__(self, coefficients, offset=0.0, sense='>='):
        self.coefficients = _frozen(np.ravel(coefficients))
        self.offset = float(offset)
        self.sense = sense

        if sense not in self.senses:
            raise InvalidParameterError(
                'Constraint sense must be one of {0}, got {1!r}.'.format(
                    ', '.join(self.senses), sense
                )
            )

        if not np.any(self.coefficients != 0):
            raise InvalidParameterError(
                'Constraint needs at least one nonzero coefficient.'
            )

    def slack(self, natural_points):
        """
        Signed slack per point, non-negative where the constraint holds.
        """
        value = np.atleast_2d(natural_points) @ self.coefficients
        value = value + self.offset
        return value if self.sense == '>=' else -value

    def to_dict(self):
        return {
            'coefficients': self.coefficients.tolist(),
            'offset': self.offset,
            'sense': self.sense
        }

    def __repr__(self):
        return 'LinearConstraint({0}, offset={1}, sense={2!r})'.format(
            self.coefficients.tolist(), self.offset, self.sense
        )


class DesignSpace(object):
    """
    Box bounded factors with optional linear constraints.

    Owns the affine map between natural coordinates and the unit cube.
    Discrete levels, when given, list the admissible values of every
    factor.
    """
    def __init__(self, bounds, constraints=None, levels=None, names=None):
        bounds = np.array(bounds, dtype=float)
        if bounds.ndim != 2 or bounds.shape[1] != 2 or len(bounds) < 1:
            raise ShapeError(
                'Bounds must be a non-empty list of (lower, upper) pairs.'
            )

        self.lower = _frozen(bounds[:, 0])
        self.upper = _frozen(bounds[:, 1])
        self.dim = len(bounds)

        for index in range(self.dim):
            if not self.lower[index] < self.upper[index]:
                raise BoundsError(
                    'Factor {0} has lower bound {1} not below upper '
                    'bound {2}.'.format(
                        index + 1, self.lower[index], self.upper[index]
                    )
                )

        self.constraints = tuple(constraints or ())
        for constraint in self.constraints:
            if len(constraint.coefficients) != self.dim:
                raise ShapeError(
                    'Constraint has {0} coefficients for a {1} factor '
                    'space.'.format(len(constraint.coefficients), self.dim)
                )

        self.levels = None
        if levels:
            if len(levels) != self.dim:
                raise ShapeError(
                    'Levels given for {0} factors, space has {1}.'.format(
                        len(levels), self.dim
                    )
                )

            self.levels = tuple(
                _frozen(np.unique(np.asarray(values, dtype=float)))
                for values in levels
            )
            for index, values in enumerate(self.levels):
                if len(values) == 0:
                    raise ConfigurationError(
                        'Factor {0} has no discrete levels.'.format(index + 1)
                    )
                if values[0] < self.lower[index] or \
                        values[-1] > self.upper[index]:
                    raise BoundsError(
                        'Factor {0} has levels outside [{1}, {2}].'.format(
                            index + 1, self.lower[index], self.upper[index]
                        )
                    )

        self.names = tuple(
            names or ['x{0}'.format(i + 1) for i in range(self.dim)]
        )
        if len(self.names) != self.dim:
            raise ShapeError('One name is needed per factor.')

    @classmethod
    def unit_cube(cls, dim, constraints=None):
        return cls([(0.0, 1.0)] * dim, constraints=constraints)

    @classmethod
    def from_dict(cls, data):
        """
        Build a space from the parsed structure of a space file.
        """
        try:
            bounds = data['bounds']
        except (KeyError, TypeError):
            raise ConfigurationError('Space definition requires bounds.')

        constraints = [
            LinearConstraint(
                item['coefficients'],
                offset=item.get('offset', 0.0),
                sense=item.get('sense', '>=')
            )
            for item in data.get('constraints') or []
        ]
        space = cls(
            bounds,
            constraints=constraints,
            levels=data.get('levels'),
            names=data.get('names')
        )

        if 'dim' in data and int(data['dim']) != space.dim:
            raise ConfigurationError(
                'Space dim {0} does not match {1} bounds.'.format(
                    data['dim'], space.dim
                )
            )
        return space

    def to_dict(self):
        data = {
            'dim': self.dim,
            'bounds': [
                [float(low), float(high)]
                for low, high in zip(self.lower, self.upper)
            ],
            'constraints': [c.to_dict() for c in self.constraints],
            'names': list(self.names)
        }
        if self.levels:
            data['levels'] = [values.tolist() for values in self.levels]
        return data

    @property
    def is_discrete(self):
        return self.levels is not None

    @property
    def width(self):
        return self.upper - self.lower

    def feasible_mask(self, natural_points):
        """
        Boolean mask of points satisfying every constraint.
        """
        natural_points = np.atleast_2d(natural_points)
        mask = np.ones(len(natural_points), dtype=bool)
        for constraint in self.constraints:
            mask &= constraint.slack(natural_points) >= -SLACK_TOLERANCE
        return mask

    def grid_cells(self):
        """
        All feasible combinations of the discrete levels.
        """
        if not self.is_discrete:
            raise InvalidParameterError(
                'Space has no discrete levels to enumerate.'
            )

        mesh = np.meshgrid(*self.levels, indexing='ij')
        cells = np.stack([axis.ravel() for axis in mesh], axis=1)
        return cells[self.feasible_mask(cells)]


class Design(object):
    """
    Ordered set of unit-cube points with per-point provenance.

    Arrays are read only once the design is built.
    """
    def __init__(
        self,
        space,
        points,
        generator,
        augmented=None,
        seed=None,
        oversample_factor=1
    ):
        points = np.array(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != space.dim:
            raise ShapeError(
                'Design points must be an n x {0} matrix.'.format(space.dim)
            )

        if len(points) < 1:
            raise ShapeError('A design needs at least one point.')

        if np.any(points < 0.0) or np.any(points > 1.0):
            raise BoundsError('Design points must lie in the unit cube.')

        if isinstance(generator, str):
            generator = [generator] * len(points)

        if augmented is None:
            augmented = np.zeros(len(points), dtype=bool)

        self.space = space
        self.points = _frozen(points)
        self.generators = tuple(generator)
        self.augmented = np.array(augmented, dtype=bool)
        self.augmented.setflags(write=False)
        self.seed = seed
        self.oversample_factor = oversample_factor

        if len(self.generators) != len(points) or \
                len(self.augmented) != len(points):
            raise ShapeError('One provenance tag is needed per point.')

        infeasible = ~space.feasible_mask(self.natural_points)
        if np.any(infeasible):
            row = int(np.flatnonzero(infeasible)[0])
            raise BoundsError(
                'Design point {0} violates the space constraints.'.format(
                    row + 1
                )
            )

        if self.is_sfd and self.has_duplicates():
            raise ShapeError('Space-filling design has duplicated points.')

    @property
    def n(self):
        return len(self.points)

    @property
    def is_sfd(self):
        return any(name in SFD_GENERATORS for name in self.generators)

    @property
    def natural_points(self):
        return from_unit_cube(self.space, self.points)

    @property
    def tags(self):
        return [
            'augmented' if augmented else
            ('grid' if name == 'grid' else 'sfd')
            for name, augmented in zip(self.generators, self.augmented)
        ]

    @property
    def name(self):
        """
        Generator name of the non-augmented points.
        """
        for name, augmented in zip(self.generators, self.augmented):
            if not augmented:
                return name
        return self.generators[0]

    def has_duplicates(self):
        return len(np.unique(self.points, axis=0)) != self.n


class Dataset(object):
    """
    Design points paired with finite scalar responses.
    """
    def __init__(self, design, responses, response_norm=None):
        responses = np.array(responses, dtype=float).ravel()
        if len(responses) != design.n:
            raise ShapeError(
                'Dataset has {0} responses for {1} points.'.format(
                    len(responses), design.n
                )
            )

        if not np.all(np.isfinite(responses)):
            raise InvalidParameterError('Responses must be finite.')

        self.design = design
        self.responses = _frozen(responses)
        self.response_norm = response_norm

    @property
    def space(self):
        return self.design.space

    @property
    def n(self):
        return self.design.n

    def normalized(self):
        """
        Copy with responses mapped onto [0, 1].

        Constant responses use a unit range.
        """
        if self.response_norm is not None:
            return self

        low = float(self.responses.min())
        high = float(self.responses.max())
        span = high - low or 1.0
        return Dataset(
            self.design,
            (self.responses - low) / span,
            response_norm=(low, low + span)
        )

    def denormalize(self, values):
        values = np.asarray(values, dtype=float)
        if self.response_norm is None:
            return values

        low, high = self.response_norm
        return values * (high - low) + low


def to_unit_cube(space, natural_points):
    """
    Map natural coordinates onto the unit cube.

    Raises BoundsError naming the first out of bounds coordinate.
    """
    natural_points = np.atleast_2d(np.asarray(natural_points, dtype=float))
    if natural_points.shape[1] != space.dim:
        raise ShapeError(
            'Points have {0} columns, space has {1} factors.'.format(
                natural_points.shape[1], space.dim
            )
        )

    tolerance = SLACK_TOLERANCE * np.maximum(1.0, np.abs(space.width))
    below = natural_points < space.lower - tolerance
    above = natural_points > space.upper + tolerance
    outside = below | above
    if np.any(outside):
        row, column = np.argwhere(outside)[0]
        raise BoundsError(
            'Factor {0} value {1} outside bounds [{2}, {3}].'.format(
                space.names[column],
                natural_points[row, column],
                space.lower[column],
                space.upper[column]
            )
        )

    unit = (natural_points - space.lower) / space.width
    return np.clip(unit, 0.0, 1.0)


def from_unit_cube(space, unit_points):
    unit_points = np.atleast_2d(np.asarray(unit_points, dtype=float))
    return space.lower + unit_points * space.width


def is_feasible(space, natural_point):
    """
    True iff every constraint holds with slack >= -1e-12.
    """
    return bool(space.feasible_mask(np.asarray(natural_point, dtype=float))[0])


def _paired(truth, predicted):
    truth = np.asarray(truth, dtype=float).ravel()
    predicted = np.asarray(predicted, dtype=float).ravel()
    if len(truth) != len(predicted):
        raise ShapeError(
            'Truth has {0} values, prediction has {1}.'.format(
                len(truth), len(predicted)
            )
        )

    if len(truth) < 1:
        raise ShapeError('Metrics need at least one value.')

    return truth, predicted


def rmse(truth, predicted):
    truth, predicted = _paired(truth, predicted)
    return float(np.sqrt(np.mean((predicted - truth) ** 2)))


def mape_details(truth, predicted):
    """
    MAPE and the number of points excluded by the near-zero guard.

    Points with |y| below 1e-8 of max |y| do not enter the average.
    """
    truth, predicted = _paired(truth, predicted)
    magnitude = np.abs(truth)
    retained = magnitude >= MAPE_ZERO_GUARD * magnitude.max()
    retained &= magnitude > 0

    if not np.any(retained):
        raise DegenerateMetricError(
            'All {0} truth values are excluded as near zero.'.format(
                len(truth)
            )
        )

    errors = np.abs(predicted[retained] - truth[retained])
    value = float(np.mean(errors / magnitude[retained]))
    return value, int(len(truth) - retained.sum())


def mape(truth, predicted):
    return mape_details(truth, predicted)[0]
