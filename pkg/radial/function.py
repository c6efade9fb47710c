# -*- mode: python; indent-tabs-mode: nil -*-

# Part of choquard-harness: numerics for Choquard-Hardy-Sobolev problems
# Copyright (C) 2026  The choquard-harness authors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as
# published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.

# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
Radial functions: nodal values on a RadialGrid, interpreted as the continuous
piecewise-linear interpolant in r.
"""

import numpy

__all__ = ('RadialFunction',)


class RadialFunction(object):
    """Values u(r_i) on a grid. With boundary=True the function represents an
    element of H^1_0(B(0,R)) and u(R) is exactly 0."""

    def __init__(self, grid, values, boundary=True):
        values = numpy.array(values, dtype=float)
        if values.shape != (len(grid),):
            raise ValueError('expected {0} nodal values, got shape {1}'.format(len(grid), values.shape))
        if not numpy.all(numpy.isfinite(values)):
            raise ValueError('radial function values must be finite')
        if boundary and values[-1] != 0.0:
            raise ValueError('boundary flag set but u(R) = {0!r}'.format(values[-1]))

        values.setflags(write=False)
        self.grid = grid
        self.values = values
        self.boundary = bool(boundary)

    @classmethod
    def zeros(cls, grid):
        return cls(grid, numpy.zeros(len(grid)))

    @classmethod
    def from_callable(cls, grid, f, boundary=True):
        """Sample f on the grid nodes; with boundary=True the last value is
        clamped to 0."""

        values = numpy.array(f(grid.nodes), dtype=float)
        if boundary:
            values[-1] = 0.0
        return cls(grid, values, boundary=boundary)

    def __repr__(self):
        return 'RadialFunction({0!r}, boundary={1})'.format(self.grid, self.boundary)

    def __len__(self):
        return len(self.values)

    def _check_compatible(self, other):
        if not self.grid.same_as(other.grid):
            raise ValueError('radial functions live on different grids')

    def scaled(self, c):
        return RadialFunction(self.grid, c * self.values, boundary=self.boundary)

    def with_values(self, values):
        return RadialFunction(self.grid, values, boundary=self.boundary)

    def __mul__(self, c):
        return self.scaled(c)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scaled(-1.0)

    def __add__(self, other):
        self._check_compatible(other)
        return RadialFunction(self.grid, self.values + other.values, boundary=self.boundary and other.boundary)

    def __sub__(self, other):
        self._check_compatible(other)
        return RadialFunction(self.grid, self.values - other.values, boundary=self.boundary and other.boundary)

    def is_zero(self):
        return not numpy.any(self.values)

    def rows(self):
        """(r, u) pairs for CSV output."""
        return zip(self.grid.nodes.tolist(), self.values.tolist())
