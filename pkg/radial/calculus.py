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
Dirichlet form, its banded solver, and the strong-form radial Laplacian used
to check the bubbles' Euler-Lagrange equations.

On a P1 function the gradient is constant on each cell, so

    int |grad u|^2 = sum_c |shell c| * ((u_(c+1) - u_c) / h_c)^2

exactly. This is u^T L u for the tridiagonal stiffness matrix L below.
"""

import numpy
import scipy.linalg

__all__ = ('DirichletForm', 'dirichlet_integral', 'dirichlet_norm_sq', 'dirichlet_mass_fraction',
           'laplace_residual')

# near-origin nodes excluded from the strong-form residual
RESIDUAL_SKIP = 2


class DirichletForm(object):
    """The stiffness matrix of a grid with u(R) = 0 imposed.

    Apply, solve and the dual (H^-1) norm all work on full nodal vectors; the
    last entry of every solution is 0."""

    def __init__(self, grid):
        self.grid = grid
        self.coeff = grid.cell_measure() / grid.widths ** 2

        diag = numpy.zeros(len(grid))
        diag[:-1] += self.coeff
        diag[1:] += self.coeff
        self.diag = diag
        self.off = -self.coeff

        # upper banded form of the interior block (Dirichlet node dropped)
        n = len(grid) - 1
        ab = numpy.zeros((2, n))
        ab[0, 1:] = self.off[:n - 1]
        ab[1, :] = diag[:n]
        self._cholesky = scipy.linalg.cholesky_banded(ab)

    def apply(self, values):
        v = numpy.asarray(values, dtype=float)
        out = self.diag * v
        out[:-1] += self.off * v[1:]
        out[1:] += self.off * v[:-1]
        return out

    def energy(self, values):
        v = numpy.asarray(values, dtype=float)
        return float(numpy.dot(self.coeff, numpy.diff(v) ** 2))

    def solve(self, rhs):
        rhs = numpy.asarray(rhs, dtype=float)
        out = numpy.zeros(len(rhs))
        out[:-1] = scipy.linalg.cho_solve_banded((self._cholesky, False), rhs[:-1])
        return out

    def dual_norm(self, g):
        """sqrt(g^T L^-1 g) on the interior nodes."""
        g = numpy.asarray(g, dtype=float)
        return float(numpy.sqrt(max(0.0, numpy.dot(g[:-1], self.solve(g)[:-1]))))


def _check_dimension(u, N):
    if N is not None and N != u.grid.dimension:
        raise ValueError('dimension {0} does not match grid dimension {1}'.format(N, u.grid.dimension))


def dirichlet_integral(u):
    """omega * int_0^R u'(r)^2 r^(N-1) dr of the P1 interpolant, with no
    boundary requirement (whole-space references use this)."""

    g = u.grid
    return float(numpy.dot(g.cell_measure(), (numpy.diff(u.values) / g.widths) ** 2))


def dirichlet_norm_sq(u, N=None):
    """||u||^2 = int |grad u|^2 for u in H^1_0(B(0,R))."""

    _check_dimension(u, N)
    if not u.boundary:
        raise ValueError('dirichlet_norm_sq needs a function with zero boundary value')
    return dirichlet_integral(u)


def dirichlet_mass_fraction(u, radius):
    """Fraction of int |grad u|^2 carried by B(0, radius); cells cut by the
    sphere contribute their inner shell share. Returns 1 for radius >= R."""

    g = u.grid
    if radius >= g.radius:
        return 1.0
    energies = g.cell_measure() * (numpy.diff(u.values) / g.widths) ** 2
    total = energies.sum()
    if total <= 0.0:
        return 0.0

    a = g.nodes[:-1]
    b = g.nodes[1:]
    N = g.dimension
    inside = numpy.clip((numpy.minimum(b, radius) ** N - numpy.minimum(a, radius) ** N) / (b ** N - a ** N), 0.0, 1.0)
    return float(numpy.dot(energies, inside) / total)


def laplace_residual(u, rhs, N=None, skip=RESIDUAL_SKIP):
    """max_i |u'' + (N-1)/r u' + rhs| over interior nodes, skipping the first
    `skip` nodes, with three-point second-order differences on the graded
    grid."""

    _check_dimension(u, N)
    if not u.grid.same_as(rhs.grid):
        raise ValueError('rhs must be sampled on the same grid as u')

    r = u.grid.nodes
    v = u.values
    N = u.grid.dimension
    i = numpy.arange(max(skip, 1), len(r) - 1)
    if len(i) == 0:
        return 0.0

    hm = r[i] - r[i - 1]
    hp = r[i + 1] - r[i]
    d2 = 2.0 * ((v[i + 1] - v[i]) / hp - (v[i] - v[i - 1]) / hm) / (hp + hm)
    d1 = (hm ** 2 * v[i + 1] + (hp ** 2 - hm ** 2) * v[i] - hp ** 2 * v[i - 1]) / (hp * hm * (hp + hm))
    return float(numpy.max(numpy.abs(d2 + (N - 1) / r[i] * d1 + rhs.values[i])))
