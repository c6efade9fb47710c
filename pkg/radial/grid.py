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
Radial grids on the ball B(0,R) in R^N.

A grid is a strictly increasing list of radii starting exactly at 0 and ending
exactly at R. Functions on a grid are continuous piecewise-linear (P1) in r,
so every cellwise integral below is an integral against the hat functions of
the two cell endpoints.
"""

import hashlib
import math

import numpy
import scipy.special

__all__ = ('MIN_POINTS', 'RadialGrid', 'make_grid', 'make_geometric_grid', 'power_nodes',
           'sphere_area', 'hat_moments')

# smallest grid we accept; anything coarser cannot resolve a bubble
MIN_POINTS = 16

# Gauss-Legendre order for cell moments in the scaled cell variable
MOMENT_ORDER = 10

_moment_x, _moment_w = numpy.polynomial.legendre.leggauss(MOMENT_ORDER)
_moment_x = 0.5 * (_moment_x + 1.0)
_moment_w = 0.5 * _moment_w


def sphere_area(N):
    """Surface area of the unit sphere in R^N, 2 pi^(N/2) / Gamma(N/2)."""
    return 2.0 * math.pi ** (0.5 * N) / scipy.special.gamma(0.5 * N)


def power_nodes(R, M, grading):
    """The power-graded radii R*(i/(M-1))^grading, i = 0..M-1, without the
    size checks of make_grid."""

    if M < 2:
        raise ValueError('need at least two nodes, got {0}'.format(M))
    nodes = R * (numpy.arange(M, dtype=float) / (M - 1)) ** grading
    nodes[0] = 0.0
    nodes[-1] = R
    return nodes


def hat_moments(nodes, k):
    """Return (left, right): per cell [a,b], the integrals of r^k against the
    hat function of a and of b respectively.

    The origin cell is integrated in closed form. Cells with h/a <= 1 use a
    Gauss-Legendre rule on (1 + (h/a) x)^k, which is analytic well beyond the
    cell; the few wide cells next to the origin use the antiderivative."""

    if k <= -1:
        raise ValueError('r^{0} is not integrable at the origin'.format(k))

    a = nodes[:-1]
    b = nodes[1:]
    h = b - a
    left = numpy.empty_like(h)
    right = numpy.empty_like(h)

    origin = (a == 0.0)
    if numpy.any(origin):
        bo = b[origin]
        right[origin] = bo ** (k + 1) / (k + 2)
        left[origin] = bo ** (k + 1) / ((k + 1) * (k + 2))

    eta = numpy.full_like(h, numpy.inf)
    eta[~origin] = h[~origin] / a[~origin]

    narrow = (~origin) & (eta <= 1.0)
    if numpy.any(narrow):
        an = a[narrow]
        en = eta[narrow]
        w = (1.0 + numpy.outer(en, _moment_x)) ** k
        scale = an ** k * h[narrow]
        left[narrow] = scale * numpy.dot(w, _moment_w * (1.0 - _moment_x))
        right[narrow] = scale * numpy.dot(w, _moment_w * _moment_x)

    wide = (~origin) & (eta > 1.0)
    if numpy.any(wide):
        aw = a[wide]
        bw = b[wide]
        hw = h[wide]
        i0 = (bw ** (k + 1) - aw ** (k + 1)) / (k + 1)
        i1 = (bw ** (k + 2) - aw ** (k + 2)) / (k + 2)
        right[wide] = (i1 - aw * i0) / hw
        left[wide] = (bw * i0 - i1) / hw

    return left, right


class RadialGrid(object):
    """An immutable grid 0 = r_0 < r_1 < ... < r_(M-1) = R in dimension N.

    kind is 'power' (nodes R*(i/(M-1))^grading) or 'geometric' (0 followed by
    a geometric progression up to R); grading is None for geometric grids.
    """

    def __init__(self, nodes, dimension, grading=None, kind='power'):
        nodes = numpy.array(nodes, dtype=float)
        if nodes.ndim != 1 or len(nodes) < MIN_POINTS:
            raise ValueError('a radial grid needs at least {0} nodes'.format(MIN_POINTS))
        if not numpy.all(numpy.isfinite(nodes)):
            raise ValueError('grid nodes must be finite')
        if nodes[0] != 0.0:
            raise ValueError('the first grid node must be exactly 0')
        if not numpy.all(numpy.diff(nodes) > 0):
            raise ValueError('grid nodes must be strictly increasing')
        if int(dimension) != dimension or dimension < 3:
            raise ValueError('dimension must be an integer >= 3, got {0}'.format(dimension))

        nodes.setflags(write=False)
        self.nodes = nodes
        self.dimension = int(dimension)
        self.radius = float(nodes[-1])
        self.grading = grading
        self.kind = kind
        self.widths = numpy.diff(nodes)
        self.widths.setflags(write=False)
        self.omega = sphere_area(self.dimension)

        self._moments = {}
        self._digest = None

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return 'RadialGrid(kind={0}, M={1}, R={2}, N={3})'.format(self.kind, len(self), self.radius, self.dimension)

    @property
    def size(self):
        return len(self.nodes)

    def hat_moments(self, k):
        """Cached hat_moments(nodes, k)."""
        m = self._moments.get(k)
        if m is None:
            left, right = hat_moments(self.nodes, k)
            left.setflags(write=False)
            right.setflags(write=False)
            m = self._moments[k] = (left, right)
        return m

    def cell_measure(self):
        """Volume of each spherical shell cell, omega * int_a^b r^(N-1) dr."""
        left, right = self.hat_moments(self.dimension - 1)
        return self.omega * (left + right)

    def nodal_weights(self, k):
        """Weights w_i with sum_i w_i f(r_i) = int_0^R f_h(r) r^k dr for the
        piecewise-linear interpolant f_h of f."""

        left, right = self.hat_moments(k)
        w = numpy.zeros(len(self.nodes))
        w[:-1] += left
        w[1:] += right
        return w

    def digest(self):
        """Hex SHA-1 of the nodes and dimension; used as a cache key."""
        if self._digest is None:
            h = hashlib.sha1()
            h.update(numpy.ascontiguousarray(self.nodes, dtype='<f8').tobytes())
            h.update(str(self.dimension).encode('ascii'))
            self._digest = h.hexdigest()
        return self._digest

    def same_as(self, other):
        return (other is self or
                (other.dimension == self.dimension and
                 len(other.nodes) == len(self.nodes) and
                 numpy.array_equal(other.nodes, self.nodes)))

    def extended(self, factor):
        """Continue a geometric grid with its last ratio out to factor*R.

        The nodes inside [0, R] are copied unchanged, so cellwise quantities on
        the inner part agree bit-for-bit with the original grid."""

        if self.kind != 'geometric':
            raise ValueError('only geometric grids can be extended')
        if factor <= 1.0:
            raise ValueError('extension factor must exceed 1, got {0}'.format(factor))

        ratio = self.nodes[-1] / self.nodes[-2]
        count = int(math.ceil(math.log(factor) / math.log(ratio)))
        outer = self.radius * ratio ** numpy.arange(1, count + 1, dtype=float)
        return RadialGrid(numpy.concatenate((self.nodes, outer)), self.dimension, kind='geometric')


def make_grid(R, M, grading=2.0, N=3):
    """Power-graded grid r_i = R*(i/(M-1))^grading on B(0,R) in R^N."""

    if R <= 0:
        raise ValueError('radius must be positive, got {0}'.format(R))
    if M < MIN_POINTS:
        raise ValueError('a radial grid needs at least {0} nodes, got {1}'.format(MIN_POINTS, M))
    if grading < 1:
        raise ValueError('grading exponent must be >= 1, got {0}'.format(grading))

    return RadialGrid(power_nodes(R, M, grading), N, grading=grading, kind='power')


def make_geometric_grid(R, M, r_min, N=3):
    """Grid {0} followed by M-1 geometrically spaced radii from r_min to R."""

    if R <= 0:
        raise ValueError('radius must be positive, got {0}'.format(R))
    if not 0 < r_min < R:
        raise ValueError('need 0 < r_min < R, got r_min={0}'.format(r_min))
    if M < MIN_POINTS:
        raise ValueError('a radial grid needs at least {0} nodes, got {1}'.format(MIN_POINTS, M))

    nodes = numpy.empty(M)
    nodes[0] = 0.0
    nodes[1:] = numpy.geomspace(r_min, R, M - 1)
    nodes[-1] = R
    return RadialGrid(nodes, N, kind='geometric')
