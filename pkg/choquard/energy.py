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
The energy functional

    I(u) = 1/2 int |grad u|^2 - lambda/(2p) int int |u|^p |u|^p / |x-y|^alpha - mu/q int |u|^q / |x|^s

on a grid, its exact discrete gradient, fibre maps t -> I(t u), and the
mountain pass geometry around 0.

Every term is a homogeneous function of the nodal values, so the fibre map of
u is determined by the three coefficients

    A = int |grad u|^2,   B = int int |u|^p |u|^p / |x-y|^alpha,   D = int |u|^q / |x|^s.
"""

import logging
import math

import numpy
import scipy.optimize

from radial import calculus, grid, quadrature, riesz
from radial.function import RadialFunction

from choquard import config, profile
from choquard import constants as sharp

__all__ = ('GeometryError', 'EnergyBreakdown', 'EnergyModel', 'FiberProfile', 'GeometryReport',
           'build_kernel', 'energy', 'energy_gradient', 'fiber_profile', 'fiber_max', 'nehari_residual',
           'norm_ball_lower_bound', 'default_probe', 'mp_geometry_check')

glogger = logging.getLogger("energy")


class GeometryError(RuntimeError):
    """No positive mountain pass ring was found."""

    def __init__(self, message, diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


@profile.trackcpu
def build_kernel(grid, alpha, cache_dir=None):
    kernel = riesz.assemble_riesz_matrix(grid, alpha, cache_dir=cache_dir)
    glogger.info('Riesz kernel ready: {0!r}, alpha={1}'.format(grid, alpha))
    return kernel


class EnergyBreakdown(object):
    def __init__(self, kinetic, nonlocal_, hardy):
        self.kinetic = kinetic
        self.nonlocal_ = nonlocal_
        self.hardy = hardy
        self.total = kinetic - nonlocal_ - hardy

    def __repr__(self):
        return 'EnergyBreakdown(kinetic={0}, nonlocal={1}, hardy={2}, total={3})'.format(
            self.kinetic, self.nonlocal_, self.hardy, self.total)

    def as_dict(self):
        return {'kinetic': self.kinetic, 'nonlocal': self.nonlocal_, 'hardy': self.hardy, 'total': self.total}


class FiberProfile(object):
    """h(t) = t^2 A/2 - lambda t^2p B/(2p) - mu t^q D/q and its positive maximum.

    degenerate is set when h has no positive maximum (h'(t)/t <= 0 near 0);
    then t_star = h_star = 0."""

    SAMPLES = 33

    def __init__(self, A, B, D, lam, mu, p, q, t_star, degenerate=False):
        self.A = A
        self.B = B
        self.D = D
        self.lam = lam
        self.mu = mu
        self.p = p
        self.q = q
        self.exponents = (2.0, 2.0 * p, q)
        self.degenerate = degenerate
        self.t_star = t_star
        self.h_star = self.h(t_star) if not degenerate else 0.0
        if degenerate:
            self.samples = numpy.zeros((0, 2))
        else:
            t = numpy.linspace(0.0, 2.0 * t_star, self.SAMPLES)
            self.samples = numpy.column_stack((t, self.h(t)))

    def h(self, t):
        t = numpy.asarray(t, dtype=float)
        return (0.5 * self.A * t ** 2 - self.lam * self.B * t ** (2.0 * self.p) / (2.0 * self.p) -
                self.mu * self.D * t ** self.q / self.q)

    def h_prime(self, t):
        t = numpy.asarray(t, dtype=float)
        return self.A * t - self.lam * self.B * t ** (2.0 * self.p - 1.0) - self.mu * self.D * t ** (self.q - 1.0)

    def as_dict(self):
        return {'A': self.A, 'B': self.B, 'D': self.D, 't_star': self.t_star, 'h_star': self.h_star,
                'degenerate': self.degenerate}


def fiber_profile(A, B, D, params):
    """Maximise the fibre map with coefficients (A, B, D).

    h'(t)/t = A - lambda B t^(2p-2) - mu D t^(q-2) is decreasing in t for
    lambda, mu >= 0, so its positive root is unique; it is bracketed by
    halving/doubling from t = 1 and polished with brentq."""

    if not A > 0:
        raise ValueError('the fibre map needs a function with nonzero gradient (A = {0})'.format(A))

    lam, mu, p, q = params.lam, params.mu, params.p, params.q
    lam_b = lam * B
    mu_d = mu * D

    def reduced(t):
        return A - lam_b * t ** (2.0 * p - 2.0) - mu_d * t ** (q - 2.0)

    lo = 1.0
    while reduced(lo) <= 0.0:
        lo *= 0.5
        if lo < 1e-300:
            glogger.debug('fibre map has no positive maximum (A={0}, muD={1})'.format(A, mu_d))
            return FiberProfile(A, B, D, lam, mu, p, q, 0.0, degenerate=True)

    hi = lo
    while reduced(hi) > 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise ValueError('fibre map does not decrease to -inf (lambda B = {0}, mu D = {1})'.format(lam_b, mu_d))

    t_star = scipy.optimize.brentq(reduced, 0.5 * hi, hi, xtol=1e-15 * hi, rtol=1e-15, maxiter=500)
    glogger.debug('fibre bracket [{0:.6g}, {1:.6g}] -> t* = {2!r}'.format(0.5 * hi, hi, t_star))
    return FiberProfile(A, B, D, lam, mu, p, q, t_star)


class EnergyModel(object):
    """I and its gradient on the grid of one kernel matrix."""

    def __init__(self, params, kernel):
        mesh = kernel.grid
        if kernel.dimension != params.N:
            raise ValueError('kernel dimension {0} does not match N = {1}'.format(kernel.dimension, params.N))
        if kernel.alpha != params.alpha:
            raise ValueError('kernel alpha {0} does not match alpha = {1}'.format(kernel.alpha, params.alpha))
        if not math.isclose(mesh.radius, params.radius, rel_tol=1e-12):
            raise ValueError('kernel grid radius {0} does not match domain radius {1}'.format(
                mesh.radius, params.radius))

        self.params = params
        self.kernel = kernel
        self.grid = mesh
        self.form = calculus.DirichletForm(mesh)
        self.hardy_weights = quadrature.hardy_weights(mesh, params.s)

    def _values(self, u):
        if isinstance(u, RadialFunction):
            self.kernel.check_grid(u.grid)
            if not u.boundary:
                raise ValueError('the energy is defined on functions vanishing at R')
            return u.values
        return numpy.asarray(u, dtype=float)

    def coefficients(self, u):
        v = self._values(u)
        a = numpy.abs(v)
        A = self.form.energy(v)
        B = self.kernel.pairing(a ** self.params.p)
        D = float(numpy.dot(self.hardy_weights, a ** self.params.q))
        return A, B, D

    def breakdown(self, u):
        A, B, D = self.coefficients(u)
        prm = self.params
        return EnergyBreakdown(0.5 * A, prm.lam * B / (2.0 * prm.p), prm.mu * D / prm.q)

    def total(self, u):
        return self.breakdown(u).total

    def gradient(self, u):
        """Partial derivatives of the discrete energy in the nodal values; the
        Dirichlet node has gradient 0."""

        v = self._values(u)
        prm = self.params
        a = numpy.abs(v)
        sign = numpy.sign(v)
        g = self.form.apply(v)
        if prm.lam:
            g -= prm.lam * riesz.riesz_potential(v, prm.p, self.kernel) * sign * a ** (prm.p - 1.0)
        if prm.mu:
            g -= prm.mu * self.hardy_weights * sign * a ** (prm.q - 1.0)
        g[-1] = 0.0
        return g

    def dual_norm(self, g):
        return self.form.dual_norm(g)

    def norm(self, u):
        return math.sqrt(self.form.energy(self._values(u)))

    def fiber(self, u):
        A, B, D = self.coefficients(u)
        return fiber_profile(A, B, D, self.params)


def energy(u, params, kernel):
    return EnergyModel(params, kernel).breakdown(u)


@profile.trackcpu
def energy_gradient(u, params, kernel):
    return EnergyModel(params, kernel).gradient(u)


def fiber_max(u, params, kernel):
    if u.is_zero():
        raise ValueError('the fibre map of u = 0 is trivial')
    return EnergyModel(params, kernel).fiber(u)


def nehari_residual(u, params, kernel):
    """|<I'(u), u>|."""
    model = EnergyModel(params, kernel)
    return abs(float(numpy.dot(model.gradient(u), u.values)))


def norm_ball_lower_bound(params, consts, rho):
    """Lower bound of I on the sphere ||u|| = rho of H^1_0(B(0,R)), from the
    sharp Hardy-Littlewood-Sobolev, Sobolev and Hardy-Sobolev inequalities
    combined with Hoelder on the ball."""

    if not consts.matches(params):
        raise ValueError('sharp constants were computed for a different (N, alpha, s)')

    rho = numpy.asarray(rho, dtype=float)
    N, alpha, s, p, q = params.N, params.alpha, params.s, params.p, params.q
    R = params.radius
    ex = params.exponents
    omega = grid.sphere_area(N)

    volume = omega * R ** N / N
    lebesgue = 2.0 * N * p / (2.0 * N - alpha)
    c_b = consts.hls_constant * (volume ** (1.0 / lebesgue - 1.0 / ex.sobolev) /
                                 math.sqrt(consts.sobolev_constant)) ** (2.0 * p)

    if s < 2:
        weight = omega * R ** (N - s) / (N - s)
        c_d = weight ** (1.0 - q / ex.hardy_sobolev) * consts.hardy_sobolev_constant ** (-0.5 * q)
    else:
        c_d = 1.0 / ex.hardy_best

    return 0.5 * rho ** 2 - params.lam / (2.0 * p) * c_b * rho ** (2.0 * p) - params.mu / q * c_d * rho ** q


def default_probe(grid):
    """(1 - (r/R)^2)^2, a smooth bump vanishing at R."""
    return RadialFunction.from_callable(grid, lambda r: (1.0 - (r / grid.radius) ** 2) ** 2)


class GeometryReport(object):
    """Mountain pass geometry along a probe: a ring ||u|| = rho on which
    I >= beta > 0 (certified on the whole sphere, or only along the probe),
    and e = e_scale * probe with I(e) < 0. Unpacks as (rho, beta, e_scale)."""

    def __init__(self, rho, beta, e_scale, certified, probe_fiber, probe):
        self.rho = rho
        self.beta = beta
        self.e_scale = e_scale
        self.certified = certified
        self.probe_fiber = probe_fiber
        self.probe = probe

    def __iter__(self):
        return iter((self.rho, self.beta, self.e_scale))

    @property
    def endpoint(self):
        return self.probe.scaled(self.e_scale)

    def as_dict(self):
        return {'rho': self.rho, 'beta': self.beta, 'e_scale': self.e_scale, 'certified': self.certified,
                'probe_level': self.probe_fiber.h_star}


def mp_geometry_check(params, probe, kernel, consts=None):
    model = EnergyModel(params, kernel)
    A, B, D = model.coefficients(probe)
    if not A > 0:
        raise ValueError('mountain pass probe must be nonzero')

    unit = fiber_profile(1.0, B / A ** params.p, D / A ** (0.5 * params.q), params)
    top = unit.t_star if not unit.degenerate else 1.0
    norms = numpy.geomspace(config.GEOMETRY_MIN_NORM, top, config.GEOMETRY_SCAN_POINTS)
    along = unit.h(norms)

    if consts is None:
        consts = sharp.sharp_constants(params.N, params.alpha, params.s)
    sphere = norm_ball_lower_bound(params, consts, norms)

    diagnostics = {'norms': [float(norms[0]), float(norms[-1])],
                   'max_probe_energy': float(numpy.max(along)),
                   'max_sphere_bound': float(numpy.max(sphere))}

    if numpy.max(sphere) > 0:
        i = int(numpy.argmax(sphere))
        rho, beta, certified = float(norms[i]), float(sphere[i]), 'sphere'
    elif not unit.degenerate and unit.h(0.5 * top) > 0:
        rho, beta, certified = 0.5 * top, float(unit.h(0.5 * top)), 'probe'
    else:
        raise GeometryError('no positive mountain pass ring down to norm {0}: I(t u) <= 0 along the probe'.format(
            config.GEOMETRY_MIN_NORM), diagnostics)

    fib = model.fiber(probe)
    t = max(2.0 * fib.t_star, 1e-300)
    for _ in range(2000):
        if fib.h(t) < 0:
            break
        t *= 2.0
    else:
        raise GeometryError('I(t u) stays nonnegative along the probe', diagnostics)

    glogger.info('Mountain pass geometry: rho={0:.4g} beta={1:.4g} ({2}), e = {3:.4g} * probe'.format(
        rho, beta, certified, t))
    return GeometryReport(rho, beta, float(t), certified, fib, probe)
