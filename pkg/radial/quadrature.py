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
Hardy-weighted and plain Lebesgue integrals of radial functions, plus a
checked wrapper around scipy's adaptive quadrature.

|u|^q is interpolated linearly between nodes and integrated exactly against
the weight r^(N-1-s), so the origin cell never evaluates the weight at 0.
"""

import logging

import numpy
import scipy.integrate

__all__ = ('QuadratureError', 'checked_quad', 'hardy_weights', 'hardy_weighted_integral',
           'lebesgue_integral', 'lebesgue_norm')

glogger = logging.getLogger("quadrature")


class QuadratureError(RuntimeError):
    """An adaptive quadrature did not reach its tolerance."""

    def __init__(self, label, value, abserr, message=''):
        super().__init__('{0}: quadrature did not converge (value {1!r}, error estimate {2!r}) {3}'.format(
            label, value, abserr, message).strip())
        self.label = label
        self.value = value
        self.abserr = abserr


def checked_quad(f, a, b, label, epsabs=0.0, epsrel=1e-11, limit=400, points=None):
    """scipy.integrate.quad, raising QuadratureError when quad reports a
    problem and the error estimate misses the requested tolerance."""

    kwargs = {'epsabs': epsabs, 'epsrel': epsrel, 'limit': limit, 'full_output': 1}
    if points is not None:
        kwargs['points'] = points
    result = scipy.integrate.quad(f, a, b, **kwargs)
    value, abserr, info = result[0], result[1], result[2]
    if len(result) > 3:
        tolerance = max(epsabs, 100.0 * epsrel * abs(value))
        if not numpy.isfinite(value) or abserr > tolerance:
            raise QuadratureError(label, value, abserr, result[3])
        glogger.debug('{0}: quad warning ignored, error {1:.3g} within tolerance'.format(label, abserr))
    return value, abserr


def hardy_weights(grid, s):
    """W_i with sum_i W_i |u_i|^q = omega * int |u|^q_h r^(N-1-s) dr."""

    if s > 2:
        raise ValueError('|x|^-s with s = {0} > 2 is not integrable against H^1 functions'.format(s))
    if s < 0:
        raise ValueError('s must be nonnegative, got {0}'.format(s))
    return grid.omega * grid.nodal_weights(grid.dimension - 1 - s)


def hardy_weighted_integral(u, q, s, N=None):
    """int_B |u|^q / |x|^s dx."""

    if N is not None and N != u.grid.dimension:
        raise ValueError('dimension {0} does not match grid dimension {1}'.format(N, u.grid.dimension))
    if q < 1:
        raise ValueError('need q >= 1, got {0}'.format(q))
    return float(numpy.dot(hardy_weights(u.grid, s), numpy.abs(u.values) ** q))


def lebesgue_integral(u, t):
    """int_B |u|^t dx."""
    return hardy_weighted_integral(u, t, 0.0)


def lebesgue_norm(u, t):
    return lebesgue_integral(u, t) ** (1.0 / t)
