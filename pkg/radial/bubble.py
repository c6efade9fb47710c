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
The explicit extremal families and their cut-off, rescaled versions.

  hardy_sobolev:  U_s(r) = (k(N-s)(N-2))^((N-2)/(2(2-s))) (k + r^(2-s))^(-(N-2)/(2-s))
  aubin_talenti:  U(r)   = (N(N-2))^((N-2)/4) (1 + r^2)^(-(N-2)/2)

A bubble at scale eps is eps^(-(N-2)/2) U(r/eps), multiplied by a cutoff that
is 1 on [0, rho], falls along a quintic smoothstep on [rho, 2 rho] and is 0
beyond.
"""

import numpy

from radial.function import RadialFunction

__all__ = ('FAMILIES', 'BubbleSpec', 'hardy_sobolev_profile', 'hardy_sobolev_slope',
           'aubin_talenti_profile', 'aubin_talenti_slope', 'cutoff', 'eval_bubble')

FAMILIES = ('hardy_sobolev', 'aubin_talenti')


def hardy_sobolev_profile(r, N, s, k=1.0):
    if s >= 2:
        raise ValueError('the Hardy-Sobolev bubble degenerates at s = 2')
    a = (N - 2) / (2.0 - s)
    c = (k * (N - s) * (N - 2)) ** (0.5 * a)
    return c * (k + numpy.asarray(r, dtype=float) ** (2.0 - s)) ** (-a)


def hardy_sobolev_slope(r, N, s, k=1.0):
    """d/dr of hardy_sobolev_profile; infinite at r = 0 when s > 1."""
    if s >= 2:
        raise ValueError('the Hardy-Sobolev bubble degenerates at s = 2')
    a = (N - 2) / (2.0 - s)
    c = (k * (N - s) * (N - 2)) ** (0.5 * a)
    r = numpy.asarray(r, dtype=float)
    with numpy.errstate(divide='ignore'):
        return -c * (N - 2) * r ** (1.0 - s) * (k + r ** (2.0 - s)) ** (-(N - s) / (2.0 - s))


def aubin_talenti_profile(r, N):
    c = (N * (N - 2.0)) ** ((N - 2) / 4.0)
    return c * (1.0 + numpy.asarray(r, dtype=float) ** 2) ** (-(N - 2) / 2.0)


def aubin_talenti_slope(r, N):
    c = (N * (N - 2.0)) ** ((N - 2) / 4.0)
    r = numpy.asarray(r, dtype=float)
    return -c * (N - 2) * r * (1.0 + r ** 2) ** (-N / 2.0)


def cutoff(r, rho):
    """C^2 plateau cutoff: 1 on [0,rho], 1 - (6x^5 - 15x^4 + 10x^3) with
    x = (r-rho)/rho on [rho, 2rho], 0 beyond."""

    x = numpy.clip((numpy.asarray(r, dtype=float) - rho) / rho, 0.0, 1.0)
    return 1.0 - x ** 3 * (10.0 + x * (-15.0 + 6.0 * x))


class BubbleSpec(object):
    """One member of a bubble family at scale epsilon.

    cutoff_inner is rho; None means the uncut bubble. k and s only matter for
    the hardy_sobolev family."""

    def __init__(self, family, epsilon, k=1.0, s=0.0, cutoff_inner=None):
        if family not in FAMILIES:
            raise ValueError('unknown bubble family {0!r}'.format(family))
        if not epsilon > 0:
            raise ValueError('bubble scale must be positive, got {0}'.format(epsilon))
        if family == 'hardy_sobolev':
            if not k > 0:
                raise ValueError('bubble parameter k must be positive, got {0}'.format(k))
            if s == 2:
                raise ValueError('the Hardy-Sobolev bubble degenerates at s = 2')
            if not 0 <= s < 2:
                raise ValueError('s must lie in [0, 2), got {0}'.format(s))
        if cutoff_inner is not None and not cutoff_inner > 0:
            raise ValueError('cutoff radius must be positive, got {0}'.format(cutoff_inner))

        self.family = family
        self.epsilon = float(epsilon)
        self.k = float(k)
        self.s = float(s)
        self.cutoff_inner = None if cutoff_inner is None else float(cutoff_inner)

    @property
    def cutoff_outer(self):
        return None if self.cutoff_inner is None else 2.0 * self.cutoff_inner

    def uncut(self):
        return BubbleSpec(self.family, self.epsilon, k=self.k, s=self.s)

    def at_scale(self, epsilon):
        return BubbleSpec(self.family, epsilon, k=self.k, s=self.s, cutoff_inner=self.cutoff_inner)

    def profile(self, r, N):
        """Unscaled, uncut profile U(r)."""
        if self.family == 'hardy_sobolev':
            return hardy_sobolev_profile(r, N, self.s, self.k)
        else:
            return aubin_talenti_profile(r, N)

    def slope(self, r, N):
        if self.family == 'hardy_sobolev':
            return hardy_sobolev_slope(r, N, self.s, self.k)
        else:
            return aubin_talenti_slope(r, N)

    def __call__(self, r, N):
        eps = self.epsilon
        u = eps ** (-(N - 2) / 2.0) * self.profile(numpy.asarray(r, dtype=float) / eps, N)
        if self.cutoff_inner is not None:
            u = u * cutoff(r, self.cutoff_inner)
        return u

    def __repr__(self):
        return 'BubbleSpec({0}, eps={1}, k={2}, s={3}, rho={4})'.format(
            self.family, self.epsilon, self.k, self.s, self.cutoff_inner)


def eval_bubble(spec, N, grid):
    """Sample the (cut) bubble on the grid. Cut bubbles carry the boundary
    flag and need 2 rho <= R; uncut ones do not vanish at R."""

    if N != grid.dimension:
        raise ValueError('bubble dimension {0} does not match grid dimension {1}'.format(N, grid.dimension))

    values = spec(grid.nodes, N)
    if spec.cutoff_inner is None:
        return RadialFunction(grid, values, boundary=False)

    if spec.cutoff_outer > grid.radius * (1 + 1e-12):
        raise ValueError('cutoff support 2*rho = {0} exceeds the grid radius {1}'.format(
            spec.cutoff_outer, grid.radius))
    values[-1] = 0.0
    return RadialFunction(grid, values, boundary=True)
