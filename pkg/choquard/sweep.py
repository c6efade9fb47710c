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
Epsilon sweeps of cut-off bubbles.

For each eps of a geometric ladder the cut bubble u_eps is sampled on its
own geometric grid (fine enough at every scale of the bubble) for the local
terms, and on one grid shared by the whole sweep for the Riesz term. The
fibre maximum of t -> I(t u_eps) is then compared with the compactness
threshold of the instance.
"""

import logging
import math

import numpy

from radial import bubble, calculus, grid, quadrature, riesz

from choquard import config, profile, util
from choquard import constants as sharp
from choquard.energy import build_kernel, fiber_profile
from choquard.params import classify_regime

__all__ = ('SweepError', 'SweepConfig', 'SweepTable', 'LevelBoundReport', 'epsilon_sweep', 'verify_level_bound',
           'default_ladder')

glogger = logging.getLogger("sweep")

COLUMNS = ('epsilon', 'kinetic', 'hardy_term', 'nonlocal_term', 't_star', 'h_star', 'margin',
           'kinetic_defect', 'hardy_defect', 'lambda', 'mu')


class SweepError(RuntimeError):
    """A row of the sweep could not be computed."""

    def __init__(self, epsilon, message):
        super().__init__('eps = {0!r}: {1}'.format(epsilon, message))
        self.epsilon = epsilon


def default_ladder(radius, steps=config.SWEEP_LADDER_STEPS):
    return [radius * 2.0 ** -j for j in range(1, steps + 1)]


class SweepConfig(object):
    """ladder: the eps values (None for R 2^-1 .. R 2^-8); theta: exponent of
    the eps^-theta prescription for lambda or mu in the large-parameter
    cases; family: bubble family, None to take it from the regime; k: the
    hardy_sobolev bubble parameter; cutoff: rho (None for R/2); points:
    nodes of the Riesz kernel grid; workers: threads computing rows."""

    def __init__(self, ladder=None, theta=None, family=None, k=1.0, cutoff=None,
                 points=config.SWEEP_KERNEL_POINTS, workers=config.SWEEP_WORKERS):
        if ladder is not None:
            ladder = [float(e) for e in ladder]
            if len(ladder) < 1:
                raise ValueError('the eps ladder is empty')
            if any(not e > 0 for e in ladder):
                raise ValueError('eps values must be positive')
            if any(b >= a for a, b in zip(ladder, ladder[1:])):
                raise ValueError('the eps ladder must be strictly decreasing')
        if family is not None and family not in bubble.FAMILIES:
            raise ValueError('unknown bubble family {0!r}'.format(family))
        if not k > 0:
            raise ValueError('bubble parameter k must be positive, got {0}'.format(k))
        if cutoff is not None and not cutoff > 0:
            raise ValueError('cutoff radius must be positive, got {0}'.format(cutoff))
        if int(points) != points or points < grid.MIN_POINTS:
            raise ValueError('kernel grid needs at least {0} points, got {1}'.format(grid.MIN_POINTS, points))
        if int(workers) != workers or workers < 1:
            raise ValueError('workers must be a positive integer, got {0}'.format(workers))

        self.ladder = ladder
        self.theta = None if theta is None else float(theta)
        self.family = family
        self.k = float(k)
        self.cutoff = None if cutoff is None else float(cutoff)
        self.points = int(points)
        self.workers = int(workers)

    def epsilons(self, radius):
        ladder = self.ladder if self.ladder is not None else default_ladder(radius)
        if ladder[0] > radius:
            raise ValueError('eps = {0} exceeds the domain radius {1}'.format(ladder[0], radius))
        return list(ladder)

    def rho(self, radius):
        rho = self.cutoff if self.cutoff is not None else 0.5 * radius
        if 2.0 * rho > radius * (1 + 1e-12):
            raise ValueError('cutoff support 2*rho = {0} exceeds the domain radius {1}'.format(2.0 * rho, radius))
        return rho

    def family_for(self, params):
        """The configured family, checked against the one the regime's level
        estimate uses."""

        regime = classify_regime(params)
        if self.family is None:
            if regime.family is not None:
                return regime.family
            return 'hardy_sobolev' if params.s < 2 else 'aubin_talenti'
        if regime.family is not None and regime.family != self.family:
            raise ValueError('case {0} is estimated with the {1} bubble, not {2}'.format(
                regime.case_id, regime.family, self.family))
        if self.family == 'hardy_sobolev' and params.s >= 2:
            raise ValueError('the hardy_sobolev bubble needs s < 2')
        return self.family

    def as_dict(self):
        return {'ladder': self.ladder, 'theta': self.theta, 'family': self.family, 'k': self.k,
                'cutoff': self.cutoff, 'points': self.points, 'workers': self.workers}


class SweepTable(object):
    """One row per eps, eps strictly decreasing."""

    def __init__(self, params, family, rho, threshold, rows):
        self.params = params
        self.family = family
        self.rho = rho
        self.threshold = threshold
        self.rows = rows

        eps = self.column('epsilon')
        if numpy.any(numpy.diff(eps) >= 0):
            raise ValueError('sweep rows must have strictly decreasing eps')

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        if name not in COLUMNS:
            raise ValueError('unknown sweep column {0!r}'.format(name))
        return numpy.array([row[name] for row in self.rows], dtype=float)

    @property
    def epsilons(self):
        return self.column('epsilon')

    def t_star_bracket(self):
        t = self.column('t_star')
        return float(numpy.min(t)), float(numpy.max(t))

    def as_rows(self):
        for row in self.rows:
            yield [row[name] for name in COLUMNS]

    def as_dict(self):
        return {'family': self.family, 'rho': self.rho, 'threshold': self.threshold,
                't_star_bracket': list(self.t_star_bracket()),
                'rows': [dict(row) for row in self.rows]}


def _local_grid(eps, radius, N):
    r_min = config.SWEEP_LOCAL_FLOOR * eps
    points = int(math.ceil(math.log(radius / r_min) / math.log(config.SWEEP_LOCAL_RATIO))) + 2
    return grid.make_geometric_grid(radius, max(points, grid.MIN_POINTS), r_min, N)


def _coupled(params, parameter, theta, eps):
    if parameter is None or theta is None:
        return params
    value = eps ** -theta
    return params.replace(lam=value) if parameter == 'lambda' else params.replace(mu=value)


@profile.trackcpu
def _sweep_row(task):
    spec, params, kernel, threshold, hardy_converges = task
    eps = spec.epsilon
    N, s, p, q = params.N, params.s, params.p, params.q
    logger = util.TaggingLogger(glogger, {'tag': 'eps={0:g}'.format(eps)})

    try:
        local = _local_grid(eps, params.radius, N)
        cut = bubble.eval_bubble(spec, N, local)
        kinetic = calculus.dirichlet_norm_sq(cut)
        hardy = quadrature.hardy_weighted_integral(cut, q, s)

        whole = bubble.eval_bubble(spec.uncut(), N, local.extended(config.SWEEP_WHOLE_SPACE))
        kinetic_defect = abs(kinetic - calculus.dirichlet_integral(whole))
        if hardy_converges:
            hardy_defect = abs(hardy - quadrature.hardy_weighted_integral(whole, q, s))
        else:
            hardy_defect = math.nan

        nonlocal_ = riesz.riesz_double_integral(bubble.eval_bubble(spec, N, kernel.grid), p, kernel)
    except quadrature.QuadratureError as e:
        raise SweepError(eps, str(e))

    for name, value in (('kinetic', kinetic), ('hardy_term', hardy), ('nonlocal_term', nonlocal_)):
        if not (math.isfinite(value) and value > 0):
            raise SweepError(eps, '{0} column is {1!r}'.format(name, value))

    fib = fiber_profile(kinetic, nonlocal_, hardy, params)
    margin = threshold - fib.h_star if threshold is not None else math.nan
    logger.info('t* = {0:.6g}, max I(t u) = {1:.10g}, margin {2:.4g}'.format(fib.t_star, fib.h_star, margin))

    return {'epsilon': eps, 'kinetic': kinetic, 'hardy_term': hardy, 'nonlocal_term': nonlocal_,
            't_star': fib.t_star, 'h_star': fib.h_star, 'margin': margin,
            'kinetic_defect': kinetic_defect, 'hardy_defect': hardy_defect,
            'lambda': params.lam, 'mu': params.mu}


def _threshold_for(params, consts, regime):
    if regime.threshold is None:
        return None
    return sharp.ps_thresholds(params, consts).value(regime.threshold)


@profile.trackcpu
def epsilon_sweep(params, sweep_config=None, consts=None, thresholds=None, cache_dir=None):
    cfg = sweep_config if sweep_config is not None else SweepConfig()
    regime = classify_regime(params)
    family = cfg.family_for(params)
    epsilons = cfg.epsilons(params.radius)
    rho = cfg.rho(params.radius)
    N = params.N

    parameter = None
    if cfg.theta is not None:
        parameter = regime.requires_large_parameter
        if parameter is None:
            glogger.warning('theta = {0} ignored: case {1} has no large-parameter prescription'.format(
                cfg.theta, regime.case_id))

    threshold = None
    if regime.threshold is not None:
        if thresholds is None:
            if consts is None:
                consts = sharp.sharp_constants(params.N, params.alpha, params.s, k=cfg.k)
            thresholds = sharp.ps_thresholds(params, consts)
        threshold = thresholds.value(regime.threshold)

    kernel_grid = grid.make_geometric_grid(params.radius, cfg.points, config.SWEEP_KERNEL_FLOOR * epsilons[-1], N)
    kernel = build_kernel(kernel_grid, params.alpha, cache_dir)

    s = params.s if family == 'hardy_sobolev' else 0.0
    hardy_converges = (N - 2) * params.q > N - params.s
    tasks = []
    for eps in epsilons:
        spec = bubble.BubbleSpec(family, eps, k=cfg.k, s=s, cutoff_inner=rho)
        tasks.append((spec, _coupled(params, parameter, cfg.theta, eps), kernel, threshold, hardy_converges))

    glogger.info('Sweeping {0} bubble over {1} scales ({2:g} .. {3:g}), rho = {4:g}'.format(
        family, len(epsilons), epsilons[0], epsilons[-1], rho))
    rows = util.map_rows(_sweep_row, tasks, workers=cfg.workers)
    return SweepTable(params, family, rho, threshold, rows)


class LevelBoundReport(object):
    """Margins threshold - max_t I(t u_eps) along a sweep and the verdict."""

    VERIFIED = 'verified'
    NOT_VERIFIED = 'not verified at this resolution'

    def __init__(self, table, threshold_name, threshold, verdict, theta_bound, warnings):
        self.table = table
        self.threshold_name = threshold_name
        self.threshold = threshold
        self.verdict = verdict
        self.theta_bound = theta_bound
        self.warnings = warnings

    @property
    def verified(self):
        return self.verdict == self.VERIFIED

    @property
    def margins(self):
        return self.table.column('margin')

    def as_dict(self):
        return {'threshold': self.threshold_name,
                'threshold_value': self.threshold,
                'verdict': self.verdict,
                'theta_bound': None if self.theta_bound is None else self.theta_bound.as_dict(),
                'warnings': list(self.warnings),
                't_star_bracket': list(self.table.t_star_bracket()),
                'margins': [{'epsilon': row['epsilon'], 'margin': row['margin'], 'h_star': row['h_star'],
                             'lambda': row['lambda'], 'mu': row['mu']} for row in self.table.rows]}


def verify_level_bound(params, sweep_config, thresholds, cache_dir=None, points=config.VERDICT_POINTS):
    regime = classify_regime(params)
    if regime.threshold is None:
        raise ValueError('case {0} has no critical threshold to verify'.format(regime.case_id))

    cfg = sweep_config if sweep_config is not None else SweepConfig()
    warnings = []
    bound = sharp.theta_lower_bound(params)
    theta_ok = True
    if bound is not None:
        if cfg.theta is None:
            warnings.append('no theta prescription: {0} held at {1:g}'.format(
                bound.parameter, params.lam if bound.parameter == 'lambda' else params.mu))
        elif not bound.admits(cfg.theta):
            theta_ok = False
            warnings.append('theta = {0:g} is outside the bound {1} for {2} = eps^-theta'.format(
                cfg.theta, bound.describe(), bound.parameter))

    for message in warnings:
        glogger.warning(message)

    table = epsilon_sweep(params, cfg, thresholds=thresholds, cache_dir=cache_dir)
    tail = table.column('margin')[-points:]
    if theta_ok and len(tail) >= points and numpy.all(tail > 0):
        verdict = LevelBoundReport.VERIFIED
    else:
        verdict = LevelBoundReport.NOT_VERIFIED
        glogger.warning('level bound {0} for case {1}'.format(verdict, regime.case_id))

    glogger.info('case {0}: margins {1}, verdict {2}'.format(
        regime.case_id, ', '.join('{0:.3g}'.format(m) for m in tail), verdict))
    return LevelBoundReport(table, regime.threshold, table.threshold, verdict, bound, warnings)
