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


class SFDUtilsException(Exception):
    """
    Base class to handle all known exceptions.

    Specific exceptions are implemented as sub classes
    of SFDUtilsException.

    Attributes
    * :attr:`message`
        Exception message text
    """
    def __init__(self, message):
        self.message = message

    def __str__(self):
        return format(self.message)


class BoundsError(SFDUtilsException):
    """
    Exception raised if a coordinate lies outside its factor bounds.
    """


class ShapeError(SFDUtilsException):
    """
    Exception raised if array shapes do not agree.
    """


class DegenerateMetricError(SFDUtilsException):
    """
    Exception raised if a metric has no points left to average.
    """


class EmptyDesignError(SFDUtilsException):
    """
    Exception raised if no feasible design point remains.
    """


class CriterionOverflow(SFDUtilsException):
    """
    Exception raised if a design criterion is infinite or not finite.
    """


class InfeasibleRegionError(SFDUtilsException):
    """
    Exception raised if oversampling cannot reach the requested
    number of feasible points.
    """


class BinningError(SFDUtilsException):
    """
    Exception raised if binning cannot produce enough distinct
    feasible grid points.
    """


class DegeneracyError(SFDUtilsException):
    """
    Exception raised if a point set does not affinely span its space.
    """


class NumericalError(SFDUtilsException):
    """
    Exception raised if a solver or factorization fails.
    """


class InvalidParameterError(SFDUtilsException):
    """
    Exception raised if an argument is outside its admissible range.
    """


class ConfigurationError(SFDUtilsException):
    """
    Exception raised if a config or space file is malformed.
    """


class ModelFormatError(SFDUtilsException):
    """
    Exception raised if a model file has an unknown format or version.
    """


class SFDUtilsWarning(UserWarning):
    """
    Base class for all warnings issued by sfd-utils.
    """


class RankWarning(SFDUtilsWarning):
    """
    Warning issued when a least squares system is rank deficient.
    """


class CoverageWarning(SFDUtilsWarning):
    """
    Warning issued when a query is not covered by any Shepard sphere.
    """


class ConstraintWarning(SFDUtilsWarning):
    """
    Warning issued when prediction queries violate the space constraints.
    """


class BudgetWarning(SFDUtilsWarning):
    """
    Warning issued when a requested size is capped or a kind is skipped.
    """
