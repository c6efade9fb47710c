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
Log-log rate fits of sweep columns against the predicted eps exponents.

A column V(eps) ~ C eps^d is fitted as ln V = d ln eps + c on the smallest
eps of the ladder. The |ln eps| variant V ~ C eps^d |ln eps| is fitted with the
log power fixed at one, ln V - ln ln(1/eps) = d ln eps + c, and counts as
detected when it explains the data much better than the pure power law.
"""

import logging

import numpy

from choquard import config
from choquard.params import same_exponent

__all__ = ('RatePrediction', 'RateFit', 'fit_rate', 'fit_series', 'predictions', 'synthetic_selftest')

glogger = logging.getLogger("ratefit")

PASS = 'pass'
FAIL = 'fail'
INCONCLUSIVE = 'inconclusive'


class RatePrediction(object):
    """Predicted exponent of a column. one_sided predictions are lower bounds
    on the slope."""

    def __init__(self, column, exponent, log_factor=False, one_sided=False, reason=''):
        self.column = column
        self.exponent = float(exponent)
        self.log_factor = log_factor
        self.one_sided = one_sided
        self.reason = reason

    def __repr__(self):
        return 'RatePrediction({0}, {1}{2}{3})'.format(self.column, self.exponent,
                                                        ', log' if self.log_factor else '',
                                                        ', one-sided' if self.one_sided else '')

    def as_dict(self):
        return {'column': self.column, 'exponent': self.exponent, 'log_factor': self.log_factor,
                'one_sided': self.one_sided, 'reason': self.reason}


class RateFit(object):
    def __init__(self, column, slope, intercept, r_squared, residual, log_residual, log_factor_detected,
                 points, expected, verdict, tolerance=config.FIT_TOLERANCE):
        self.column = column
        self.slope = slope
        self.intercept = intercept
        self.r_squared = r_squared
        self.residual = residual
        self.log_residual = log_residual
        self.log_factor_detected = log_factor_detected
        self.points = points
        self.expected = expected
        self.verdict = verdict
        self.tolerance = tolerance

    @property
    def passed(self):
        return self.verdict == PASS

    @property
    def inconclusive(self):
        return self.verdict == INCONCLUSIVE

    def as_dict(self):
        return {'column': self.column,
                'fitted': self.slope,
                'expected': None if self.expected is None else self.expected.exponent,
                'one_sided': None if self.expected is None else self.expected.one_sided,
                'log_factor_expected': None if self.expected is None else self.expected.log_factor,
                'log_factor_detected': self.log_factor_detected,
                'r_squared': self.r_squared,
                'residual': self.residual,
                'log_residual': self.log_residual,
                'points': self.points,
                'tolerance': self.tolerance,
                'verdict': self.verdict}


def _linear_fit(x, y):
    slope, intercept = numpy.polyfit(x, y, 1)
    residual = float(numpy.sum((y - (slope * x + intercept)) ** 2))
    total = float(numpy.sum((y - numpy.mean(y)) ** 2))
    r_squared = 1.0 - residual / total if total > 0 else 1.0
    return float(slope), float(intercept), residual, r_squared


def fit_series(column, epsilons, values, expected=None, points=config.FIT_POINTS,
               tolerance=config.FIT_TOLERANCE):
    """Fit the last `points` finite (eps, value) pairs. Needs at least
    config.FIT_MIN_POINTS of them."""

    eps = numpy.asarray(epsilons, dtype=float)
    v = numpy.asarray(values, dtype=float)
    usable = numpy.isfinite(v) & (v > 0) & (eps > 0)
    eps = eps[usable][-points:]
    v = v[usable][-points:]
    if len(eps) < config.FIT_MIN_POINTS:
        raise ValueError('{0}: rate fit needs at least {1} positive values, got {2}'.format(
            column, config.FIT_MIN_POINTS, len(eps)))

    x = numpy.log(eps)
    y = numpy.log(v)
    slope, intercept, residual, r_squared = _linear_fit(x, y)

    log_residual = None
    detected = False
    if numpy.all(eps < 1.0):
        lslope, lintercept, log_residual, lr_squared = _linear_fit(x, y - numpy.log(-x))
        detected = log_residual * config.LOG_FACTOR_IMPROVEMENT <= residual and log_residual < residual
        if detected:
            slope, intercept, r_squared = lslope, lintercept, lr_squared

    if expected is None:
        verdict = None
    elif r_squared < config.FIT_MIN_R2:
        verdict = INCONCLUSIVE
    else:
        if expected.one_sided:
            slope_ok = slope >= expected.exponent - tolerance
        else:
            slope_ok = abs(slope - expected.exponent) <= tolerance
        verdict = PASS if slope_ok and detected == expected.log_factor else FAIL

    fit = RateFit(column, slope, intercept, r_squared, residual, log_residual, detected, len(eps), expected,
                  verdict, tolerance)
    if verdict == INCONCLUSIVE:
        glogger.warning('{0}: fit inconclusive (R^2 = {1:.4f})'.format(column, r_squared))
    elif verdict == FAIL:
        glogger.warning('{0}: slope {1:.4f}{2} does not match {3!r}'.format(
            column, slope, ' with log factor' if detected else '', expected))
    else:
        glogger.info('{0}: slope {1:.4f}{2}, R^2 = {3:.6f}, verdict {4}'.format(
            column, slope, ' with log factor' if detected else '', r_squared, verdict))
    return fit


def fit_rate(table, column, expected=None, points=config.FIT_POINTS):
    if len(table) < config.FIT_MIN_POINTS:
        raise ValueError('rate fit needs at least {0} sweep rows, got {1}'.format(config.FIT_MIN_POINTS, len(table)))
    return fit_series(column, table.epsilons, table.column(column), expected, points)


def predictions(params, family):
    """Predicted eps exponents of the sweep columns for a bubble family.

    The Hardy term of a subcritical q follows three regimes around
    q = (N-s)/(N-2); at the split the rate carries a |ln eps| factor. The
    Riesz term is only bounded from one side."""

    N, alpha, s, p, q = params.N, params.alpha, params.s, params.p, params.q
    split = (N - s) / (N - 2)
    result = {'kinetic_defect': RatePrediction('kinetic_defect', N - 2, reason='O(eps^(N-2)) cutoff defect')}

    if _decays(q, split):
        result['hardy_defect'] = RatePrediction('hardy_defect', (N - 2) * q / 2.0,
                                                reason='tail of |U|^q |x|^-s beyond the cutoff')

    if not params.q_critical():
        if same_exponent(q, split):
            result['hardy_term'] = RatePrediction('hardy_term', N - (N - 2) * q / 2.0 - s, log_factor=True,
                                                  reason='q = (N-s)/(N-2)')
        elif q > split:
            result['hardy_term'] = RatePrediction('hardy_term', N - (N - 2) * q / 2.0 - s,
                                                  reason='q > (N-s)/(N-2)')
        else:
            result['hardy_term'] = RatePrediction('hardy_term', (N - 2) * q / 2.0, reason='q < (N-s)/(N-2)')

    if not params.p_critical() and (N - 2) * 2.0 * p > 2.0 * N - alpha:
        result['nonlocal_term'] = RatePrediction('nonlocal_term', 2.0 * N - alpha - (N - 2) * p, one_sided=True,
                                                 reason='lower bound from the double integral over B(0, delta)')

    glogger.debug('predictions for {0!r} ({1}): {2}'.format(params, family, sorted(result)))
    return result


def _decays(q, split):
    return q > split and not same_exponent(q, split)


def synthetic_selftest(exponent=1.7, scale=3.0, steps=config.SWEEP_LADDER_STEPS):
    """Fit eps -> scale * eps^exponent on the default ladder of the unit
    ball; the slope must come back to 1e-6."""

    eps = numpy.array([2.0 ** -j for j in range(1, steps + 1)])
    fit = fit_series('synthetic', eps, scale * eps ** exponent, RatePrediction('synthetic', exponent))
    ok = abs(fit.slope - exponent) <= 1e-6 and fit.passed
    if not ok:
        glogger.error('rate fitter self-test failed: slope {0!r}, expected {1!r}'.format(fit.slope, exponent))
    return fit, ok
