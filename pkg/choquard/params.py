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
The problem instance, its critical exponents, and the regime classifier.

Existence cases:

  1    1 < p < 2_a^*, 2 < q < 2^*(s)
  2    1 < p < 2_a^*, s = 2 (so q = 2), 0 < mu < (N-2)^2/4
  3    q = 2^*(s) > 2:  i) 2_a^* - 1 < p < 2_a^*   ii) 1 < p <= 2_a^* - 1, alpha <= 4, lambda large
  4    p = 2_a^*, 2 < q < 2^*(s):
         i)   N = 3, s < 1, 2^*(s) - 2 < q
         ii)  N = 3, s < 1, q <= 2^*(s) - 2, mu large
         iii) N = 3, 1 <= s < 2
         iv)  N >= 4, 0 < s < 2

Everything else (both exponents critical, q = 2 with s < 2, ...) is
'uncovered'.
"""

from choquard import config

__all__ = ('ProblemParams', 'DerivedExponents', 'RegimeCase', 'exponents_for', 'derive_exponents',
           'classify_regime', 'same_exponent')

JSON_KEYS = ('N', 'alpha', 's', 'p', 'q', 'lambda', 'mu', 'radius')


def same_exponent(a, b, rtol=None):
    if rtol is None:
        rtol = config.EXPONENT_RTOL
    return abs(a - b) <= rtol * max(abs(a), abs(b))


def _above(a, b):
    return a > b and not same_exponent(a, b)


def _check_dims(N, alpha, s):
    if int(N) != N or N < 3:
        raise ValueError('N must be an integer >= 3, got {0}'.format(N))
    if not 0 < alpha < N:
        raise ValueError('alpha must lie in (0, N) = (0, {0}), got {1}'.format(N, alpha))
    if not 0 <= s <= 2:
        raise ValueError('s must lie in [0, 2], got {0}'.format(s))


class DerivedExponents(object):
    def __init__(self, N, alpha, s):
        _check_dims(N, alpha, s)
        self.upper_critical = (2.0 * N - alpha) / (N - 2)
        self.lower_critical = (2.0 * N - alpha) / N
        self.hardy_sobolev = 2.0 * (N - s) / (N - 2)
        self.sobolev = 2.0 * N / (N - 2)
        self.hardy_best = (N - 2) ** 2 / 4.0

    def as_dict(self):
        return {
            'upper_critical': self.upper_critical,
            'lower_critical': self.lower_critical,
            'hardy_sobolev': self.hardy_sobolev,
            'sobolev': self.sobolev,
            'hardy_best': self.hardy_best,
        }


def exponents_for(N, alpha, s):
    return DerivedExponents(N, alpha, s)


class ProblemParams(object):
    """(N, alpha, s, p, q, lambda, mu) on the ball B(0, radius).

    strict=False admits lambda = 0 or mu = 0 (the degenerate single-power
    sub-cases used as oracles)."""

    def __init__(self, N, alpha, s, p, q, lam, mu, radius=config.DEFAULT_RADIUS, strict=True):
        _check_dims(N, alpha, s)
        ex = DerivedExponents(N, alpha, s)
        if not 1 < p or _above(p, ex.upper_critical):
            raise ValueError('p must lie in (1, {0}], got {1}'.format(ex.upper_critical, p))
        if q < 2 or _above(q, ex.hardy_sobolev):
            raise ValueError('q must lie in [2, {0}], got {1}'.format(ex.hardy_sobolev, q))
        if strict:
            if not lam > 0:
                raise ValueError('lambda must be positive, got {0}'.format(lam))
            if not mu > 0:
                raise ValueError('mu must be positive, got {0}'.format(mu))
        elif lam < 0 or mu < 0 or lam == mu == 0:
            raise ValueError('lambda and mu must be nonnegative and not both zero')
        if not radius > 0:
            raise ValueError('domain radius must be positive, got {0}'.format(radius))

        self.N = int(N)
        self.alpha = float(alpha)
        self.s = float(s)
        self.p = float(p)
        self.q = float(q)
        self.lam = float(lam)
        self.mu = float(mu)
        self.radius = float(radius)
        self.strict = strict

    def __repr__(self):
        return ('ProblemParams(N={0.N}, alpha={0.alpha}, s={0.s}, p={0.p}, q={0.q}, '
                'lambda={0.lam}, mu={0.mu}, radius={0.radius})').format(self)

    def replace(self, **changes):
        values = {'N': self.N, 'alpha': self.alpha, 's': self.s, 'p': self.p, 'q': self.q,
                  'lam': self.lam, 'mu': self.mu, 'radius': self.radius, 'strict': self.strict}
        values.update(changes)
        return ProblemParams(**values)

    def as_dict(self):
        return {'N': self.N, 'alpha': self.alpha, 's': self.s, 'p': self.p, 'q': self.q,
                'lambda': self.lam, 'mu': self.mu, 'radius': self.radius}

    @classmethod
    def from_dict(cls, d, strict=True):
        return cls(N=d['N'], alpha=d['alpha'], s=d['s'], p=d['p'], q=d['q'], lam=d['lambda'], mu=d['mu'],
                   radius=d.get('radius', config.DEFAULT_RADIUS), strict=strict)

    @property
    def exponents(self):
        return DerivedExponents(self.N, self.alpha, self.s)

    def p_critical(self):
        return same_exponent(self.p, self.exponents.upper_critical)

    def q_critical(self):
        return same_exponent(self.q, self.exponents.hardy_sobolev)


def derive_exponents(params):
    return DerivedExponents(params.N, params.alpha, params.s)


class RegimeCase(object):
    """Which existence case an instance falls into.

    requires_large_parameter is 'lambda' or 'mu' for 3ii / 4ii; threshold names
    the compactness level that governs the case and family the bubble used
    to estimate the mountain pass level below it."""

    CASE_IDS = ('1', '2', '3i', '3ii', '4i', '4ii', '4iii', '4iv', 'uncovered')

    def __init__(self, case_id, reason):
        if case_id not in self.CASE_IDS:
            raise ValueError('unknown case {0!r}'.format(case_id))
        self.case_id = case_id
        self.reason = reason
        self.requires_large_parameter = {'3ii': 'lambda', '4ii': 'mu'}.get(case_id)
        if case_id.startswith('3'):
            self.threshold = 'hardy_sobolev'
            self.family = 'hardy_sobolev'
        elif case_id.startswith('4'):
            self.threshold = 'hls'
            self.family = 'aubin_talenti'
        else:
            self.threshold = None
            self.family = None

    @property
    def covered(self):
        return self.case_id != 'uncovered'

    @property
    def critical(self):
        return self.threshold is not None

    def __repr__(self):
        return 'RegimeCase({0!r})'.format(self.case_id)

    def as_dict(self):
        return {'case_id': self.case_id,
                'requires_large_parameter': self.requires_large_parameter,
                'threshold': self.threshold,
                'family': self.family,
                'reason': self.reason}


def classify_regime(params):
    ex = params.exponents
    N, s, p, q = params.N, params.s, params.p, params.q
    p_crit = params.p_critical()
    q_crit = params.q_critical()

    if s == 2:
        if p_crit:
            return RegimeCase('uncovered', 'p = 2_a^* with s = 2 is the doubly critical problem')
        if params.mu < ex.hardy_best:
            return RegimeCase('2', 's = 2 and mu < (N-2)^2/4')
        return RegimeCase('uncovered', 's = 2 needs mu < (N-2)^2/4 = {0}'.format(ex.hardy_best))

    if p_crit and q_crit:
        return RegimeCase('uncovered', 'p = 2_a^* and q = 2^*(s) simultaneously')

    if q_crit:
        if _above(p, ex.upper_critical - 1):
            return RegimeCase('3i', 'q = 2^*(s) and 2_a^* - 1 < p < 2_a^*')
        if params.alpha <= 4:
            return RegimeCase('3ii', 'q = 2^*(s), p <= 2_a^* - 1, alpha <= 4, lambda large')
        return RegimeCase('uncovered', 'q = 2^*(s), p <= 2_a^* - 1 needs alpha <= 4')

    if p_crit:
        if not _above(q, 2):
            return RegimeCase('uncovered', 'p = 2_a^* needs q > 2')
        if N == 3:
            if s < 1:
                if _above(q, ex.hardy_sobolev - 2):
                    return RegimeCase('4i', 'p = 2_a^*, N = 3, s < 1, q > 2^*(s) - 2')
                return RegimeCase('4ii', 'p = 2_a^*, N = 3, s < 1, q <= 2^*(s) - 2, mu large')
            return RegimeCase('4iii', 'p = 2_a^*, N = 3, 1 <= s < 2')
        if s > 0:
            return RegimeCase('4iv', 'p = 2_a^*, N >= 4, 0 < s < 2')
        return RegimeCase('uncovered', 'p = 2_a^* with N >= 4 needs s > 0')

    if _above(q, 2):
        return RegimeCase('1', 'both exponents subcritical')
    return RegimeCase('uncovered', 'q = 2 needs s = 2')
