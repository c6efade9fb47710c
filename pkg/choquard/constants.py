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
Sharp constants and compactness thresholds.

C(N,alpha) has a closed form. S, mu_s and S_{H,L} are computed by quadrature of
the explicit extremals on [0, inf), never taken from tables:

  S        = int |grad U|^2 / (int U^2*)^(2/2*)
  mu_s     = (int |grad U_s|^2)^((2-s)/(N-s))
  S_{H,L}  = int |grad U|^2 / (int int U^{2_a^*} U^{2_a^*} / |x-y|^alpha)^(1/2_a^*)

and S = C(N,alpha)^(1/2_a^*) S_{H,L} is a consistency check between them.
"""

import logging
import math

import numpy
import scipy.special

from radial import bubble, grid, riesz
from radial.quadrature import checked_quad

from choquard import config, params as problem

__all__ = ('SharpConstants', 'ThresholdReport', 'ThetaBound', 'hls_sharp_constant', 'sobolev_constant',
           'hardy_sobolev_constant', 'hardy_sobolev_quotient_integral', 'hls_best_ratio', 'sharp_constants',
           'ps_thresholds', 'theta_lower_bound')

glogger = logging.getLogger("constants")


def _half_line(f, label, epsrel=None):
    """int_0^inf f, split at 1 so the tail goes to the infinite-range rule."""

    if epsrel is None:
        epsrel = config.CONSTANT_EPSREL
    head, _ = checked_quad(f, 0.0, 1.0, label, epsrel=epsrel, limit=config.CONSTANT_LIMIT)
    tail, _ = checked_quad(f, 1.0, numpy.inf, label, epsrel=epsrel, limit=config.CONSTANT_LIMIT)
    return head + tail


def hls_sharp_constant(N, alpha):
    """pi^(a/2) Gamma((N-a)/2) / Gamma(N - a/2) * (Gamma(N/2) / Gamma(N))^(a/N - 1)."""

    if int(N) != N or N < 3:
        raise ValueError('N must be an integer >= 3, got {0}'.format(N))
    if not 0 < alpha < N:
        raise ValueError('alpha must lie in (0, N) = (0, {0}), got {1}'.format(N, alpha))

    lg = scipy.special.gammaln
    return math.exp(0.5 * alpha * math.log(math.pi) + lg(0.5 * (N - alpha)) - lg(N - 0.5 * alpha) +
                    (alpha / N - 1.0) * (lg(0.5 * N) - lg(N)))


def sobolev_constant(N):
    if int(N) != N or N < 3:
        raise ValueError('N must be an integer >= 3, got {0}'.format(N))

    omega = grid.sphere_area(N)
    crit = 2.0 * N / (N - 2)
    kinetic = omega * _half_line(lambda r: bubble.aubin_talenti_slope(r, N) ** 2 * r ** (N - 1), 'S kinetic')
    mass = omega * _half_line(lambda r: bubble.aubin_talenti_profile(r, N) ** crit * r ** (N - 1), 'S mass')
    return kinetic / mass ** (2.0 / crit)


def _check_hardy_sobolev(N, s, k):
    if int(N) != N or N < 3:
        raise ValueError('N must be an integer >= 3, got {0}'.format(N))
    if s == 2:
        raise ValueError('mu_s is not defined by the bubble at s = 2')
    if not 0 <= s < 2:
        raise ValueError('s must lie in [0, 2), got {0}'.format(s))
    if not k > 0:
        raise ValueError('bubble parameter k must be positive, got {0}'.format(k))


def hardy_sobolev_constant(N, s, k=1.0):
    """mu_s(R^N) from the kinetic energy of U_s."""

    _check_hardy_sobolev(N, s, k)
    omega = grid.sphere_area(N)
    kinetic = omega * _half_line(lambda r: bubble.hardy_sobolev_slope(r, N, s, k) ** 2 * r ** (N - 1),
                                 'mu_s kinetic')
    return kinetic ** ((2.0 - s) / (N - s))


def hardy_sobolev_quotient_integral(N, s, k=1.0):
    """int U_s^(2^*(s)) / |x|^s, the second side of the scaling identity."""

    _check_hardy_sobolev(N, s, k)
    omega = grid.sphere_area(N)
    crit = 2.0 * (N - s) / (N - 2)
    return omega * _half_line(lambda r: bubble.hardy_sobolev_profile(r, N, s, k) ** crit * r ** (N - 1 - s),
                              'mu_s mass')


def hls_best_ratio(N, alpha):
    """S_{H,L}, evaluated on the Aubin-Talenti bubble with the Riesz term
    reduced to a nested radial quadrature of the sphere-averaged kernel."""

    if not 0 < alpha < N:
        raise ValueError('alpha must lie in (0, N) = (0, {0}), got {1}'.format(N, alpha))

    omega = grid.sphere_area(N)
    upper = (2.0 * N - alpha) / (N - 2)

    def density(r):
        return bubble.aubin_talenti_profile(r, N) ** upper * r ** (N - 1)

    def kernel(r1, r2):
        return float(riesz.angular_kernel(r1, r2, alpha, N))

    def potential(r):
        f = lambda t: density(t) * kernel(r, t)  # noqa: E731
        inner = 0.0
        if r > 0:
            inner += checked_quad(f, 0.0, r, 'S_HL inner', epsrel=1e-10, limit=config.CONSTANT_LIMIT)[0]
        inner += checked_quad(f, r, 2.0 * r + 1.0, 'S_HL inner', epsrel=1e-10, limit=config.CONSTANT_LIMIT)[0]
        inner += checked_quad(f, 2.0 * r + 1.0, numpy.inf, 'S_HL inner', epsrel=1e-10,
                              limit=config.CONSTANT_LIMIT)[0]
        return density(r) * inner

    double = omega ** 2 * _half_line(potential, 'S_HL outer', epsrel=1e-8)
    kinetic = omega * _half_line(lambda r: bubble.aubin_talenti_slope(r, N) ** 2 * r ** (N - 1), 'S_HL kinetic')
    return kinetic / double ** (1.0 / upper)


class SharpConstants(object):
    """C(N,alpha), S, mu_s (None at s = 2) and optionally S_{H,L}, with a
    provenance note per value."""

    def __init__(self, N, alpha, s, hls_constant, sobolev_constant, hardy_sobolev_constant,
                 hls_best_ratio=None):
        self.N = N
        self.alpha = alpha
        self.s = s
        self.hls_constant = hls_constant
        self.sobolev_constant = sobolev_constant
        self.hardy_sobolev_constant = hardy_sobolev_constant
        self.hls_best_ratio = hls_best_ratio
        self.provenance = {
            'hls_constant': 'closed_form',
            'sobolev_constant': 'quadrature',
            'hardy_sobolev_constant': 'quadrature' if hardy_sobolev_constant is not None else 'undefined',
            'hls_best_ratio': 'quadrature' if hls_best_ratio is not None else 'not_computed',
        }

    def matches(self, params):
        return self.N == params.N and self.alpha == params.alpha and self.s == params.s

    def relation_defect(self):
        """|S - C^(1/2_a^*) S_{H,L}| / S."""
        if self.hls_best_ratio is None:
            return None
        upper = (2.0 * self.N - self.alpha) / (self.N - 2)
        predicted = self.hls_constant ** (1.0 / upper) * self.hls_best_ratio
        return abs(self.sobolev_constant - predicted) / self.sobolev_constant

    def as_dict(self):
        return {'hls_constant': self.hls_constant,
                'sobolev_constant': self.sobolev_constant,
                'hardy_sobolev_constant': self.hardy_sobolev_constant,
                'hls_best_ratio': self.hls_best_ratio,
                'relation_defect': self.relation_defect(),
                'provenance': dict(self.provenance)}


def sharp_constants(N, alpha, s, k=1.0, with_ratio=False):
    mu_s = hardy_sobolev_constant(N, s, k) if s < 2 else None
    ratio = hls_best_ratio(N, alpha) if with_ratio else None
    return SharpConstants(N, alpha, s, hls_sharp_constant(N, alpha), sobolev_constant(N), mu_s, ratio)


class ThresholdReport(object):
    """The two compactness levels and which of them apply to an instance."""

    def __init__(self, hardy_sobolev_threshold, hls_threshold, applicable):
        self.hardy_sobolev_threshold = hardy_sobolev_threshold
        self.hls_threshold = hls_threshold
        self.applicable = tuple(applicable)

    def value(self, name):
        if name == 'hardy_sobolev':
            return self.hardy_sobolev_threshold
        if name == 'hls':
            return self.hls_threshold
        raise ValueError('unknown threshold {0!r}'.format(name))

    def governing(self):
        """The applicable threshold value, or None when compactness holds at
        every level. With both exponents critical the smaller one."""

        values = [self.value(name) for name in self.applicable]
        return min(values) if values else None

    def as_dict(self):
        return {'hardy_sobolev_threshold': self.hardy_sobolev_threshold,
                'hls_threshold': self.hls_threshold,
                'applicable': list(self.applicable)}


def ps_thresholds(params, consts):
    if not consts.matches(params):
        raise ValueError('sharp constants were computed for a different (N, alpha, s)')

    N, alpha, s = params.N, params.alpha, params.s
    ex = params.exponents

    if s < 2:
        if params.mu > 0:
            hs = ((2.0 - s) / (2.0 * (N - s)) * params.mu ** (-2.0 / (ex.hardy_sobolev - 2.0)) *
                  consts.hardy_sobolev_constant ** ((N - s) / (2.0 - s)))
        else:
            hs = math.inf
    else:
        hs = None

    upper = ex.upper_critical
    if params.lam > 0:
        hls = ((N - alpha + 2.0) / (2.0 * (2.0 * N - alpha)) *
               (1.0 / (params.lam * consts.hls_constant)) ** (1.0 / (upper - 1.0)) *
               consts.sobolev_constant ** (upper / (upper - 1.0)))
    else:
        hls = math.inf

    applicable = []
    if s < 2 and params.q_critical():
        applicable.append('hardy_sobolev')
    if params.p_critical():
        applicable.append('hls')

    return ThresholdReport(hs, hls, applicable)


class ThetaBound(object):
    """The prescription lambda = eps^-theta (or mu) needs bound < theta, and
    theta < upper when upper is set."""

    def __init__(self, bound, upper, parameter):
        self.bound = bound
        self.upper = upper
        self.parameter = parameter

    def admits(self, theta):
        if theta <= self.bound:
            return False
        return self.upper is None or theta < self.upper

    def describe(self):
        if self.upper is None:
            return '{0:g} < theta'.format(self.bound)
        return '{0:g} < theta < {1:g}'.format(self.bound, self.upper)

    def as_dict(self):
        return {'bound': self.bound, 'upper': self.upper, 'parameter': self.parameter}


def helping_decay(params):
    """Decay exponent in eps of the term that pushes the fibre maximum of
    the cut bubble below the threshold (nonlocal term in case 3, Hardy term
    with the Aubin-Talenti bubble in case 4), and whether it carries a
    |ln eps| factor."""

    N, alpha, s, p, q = params.N, params.alpha, params.s, params.p, params.q
    regime = problem.classify_regime(params)
    if regime.case_id.startswith('3'):
        return 2.0 * N - alpha - (N - 2) * p, False

    split = (N - s) / (N - 2)
    if problem.same_exponent(q, split):
        return N - (N - 2) * q / 2.0 - s, True
    if q > split:
        return N - (N - 2) * q / 2.0 - s, False
    return (N - 2) * q / 2.0, False


def theta_lower_bound(params):
    """ThetaBound for cases 3ii and 4ii, None otherwise.

    The helping term must decay slower than the O(eps^(N-2)) kinetic defect,
    so theta > d - (N - 2) with d from helping_decay. With the |ln eps|
    factor the window is also capped: theta < d - (N - 2) + 1."""

    regime = problem.classify_regime(params)
    if regime.requires_large_parameter is None:
        return None
    decay, log_factor = helping_decay(params)
    bound = decay - (params.N - 2)
    upper = bound + 1.0 if log_factor else None
    return ThetaBound(bound, upper, regime.requires_large_parameter)
