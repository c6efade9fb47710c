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
Mountain pass solver.

The path class is Gamma = {paths from 0 to a point of negative energy}. The
working path is always the ray segment from 0 through the current point w out
past the zero of t -> I(t w); its maximum is the fibre maximum of w. Each
iteration moves that maximal point along the H^1-preconditioned negative
gradient, re-interpolates the ray through the moved point and re-maximises,
with Armijo backtracking on the re-maximised level. The level sequence is
therefore non-increasing and starts at max_t I(t e).
"""

import logging
import math

import numpy

from radial import calculus
from radial.function import RadialFunction

from choquard import config, profile, util
from choquard import constants as sharp
from choquard.energy import EnergyModel, default_probe, fiber_profile, mp_geometry_check
from choquard.params import classify_regime

__all__ = ('SolverError', 'NonConvergence', 'DegeneratePath', 'TrivialSolution', 'SolverConfig', 'TraceEntry',
           'PathState', 'MountainPassResult', 'DiagnosticsReport', 'LargeParameterReport',
           'mountain_pass_solve', 'ps_diagnostics', 'large_parameter_search')

glogger = logging.getLogger("solver")


class SolverError(RuntimeError):
    def __init__(self, message, trace=None, best=None):
        super().__init__(message)
        self.trace = trace if trace is not None else []
        self.best = best


class NonConvergence(SolverError):
    """Iteration budget exhausted or line search stalled."""
    pass


class DegeneratePath(SolverError):
    """The path maximum collapsed onto an endpoint."""
    pass


class TrivialSolution(SolverError):
    """The iteration converged to (numerically) u = 0."""
    pass


class SolverConfig(object):
    def __init__(self, tol=config.SOLVER_TOL, max_iters=config.SOLVER_MAX_ITERS,
                 path_points=config.SOLVER_PATH_POINTS, backtracking=config.SOLVER_BACKTRACKING,
                 armijo=config.SOLVER_ARMIJO):
        if not tol > 0:
            raise ValueError('solver tolerance must be positive, got {0}'.format(tol))
        if int(max_iters) != max_iters or max_iters < 1:
            raise ValueError('max_iters must be a positive integer, got {0}'.format(max_iters))
        if int(path_points) != path_points or path_points < 8:
            raise ValueError('path_points must be an integer >= 8, got {0}'.format(path_points))
        if not 0 < backtracking < 1:
            raise ValueError('backtracking factor must lie in (0, 1), got {0}'.format(backtracking))
        if not 0 < armijo < 1:
            raise ValueError('armijo constant must lie in (0, 1), got {0}'.format(armijo))

        self.tol = float(tol)
        self.max_iters = int(max_iters)
        self.path_points = int(path_points)
        self.backtracking = float(backtracking)
        self.armijo = float(armijo)

    def as_dict(self):
        return {'tol': self.tol, 'max_iters': self.max_iters, 'path_points': self.path_points,
                'backtracking': self.backtracking, 'armijo': self.armijo}


class TraceEntry(object):
    __slots__ = ('iteration', 'level', 'gradient_norm', 'step', 'values')

    def __init__(self, iteration, level, gradient_norm, step, values):
        self.iteration = iteration
        self.level = level
        self.gradient_norm = gradient_norm
        self.step = step
        self.values = values


class PathState(object):
    """K points t_k * direction, t_k uniform on [0, t_end], with I < 0 at the
    end. Uniform in t is uniform in energy-norm arc length on a ray."""

    def __init__(self, model, direction, t_end, points):
        self.grid = model.grid
        self.direction = numpy.array(direction, dtype=float)
        self.t = numpy.linspace(0.0, t_end, points)
        fib = fiber_profile(*model.coefficients(self.direction), model.params)
        self.energies = fib.h(self.t)
        self.max_index = int(numpy.argmax(self.energies))

    def __len__(self):
        return len(self.t)

    def point(self, k):
        return RadialFunction(self.grid, self.t[k] * self.direction)

    @property
    def end_energy(self):
        return float(self.energies[-1])


def _ray_path(model, w, fib, points):
    """Ray through w (at its fibre maximum, t = 1) out to the first doubling
    of t where I turns negative."""

    t_end = 2.0 * fib.t_star
    while fib.h(t_end) >= 0:
        t_end *= 2.0
    return PathState(model, w / fib.t_star, t_end, points)


class MountainPassResult(object):
    def __init__(self, solution, level, gradient_norm, iterations, below_threshold, threshold,
                 concentration_index, beta, upper_level, nehari_residual, trace, path):
        self.solution = solution
        self.level = level
        self.gradient_norm = gradient_norm
        self.iterations = iterations
        self.below_threshold = below_threshold
        self.threshold = threshold
        self.concentration_index = concentration_index
        self.beta = beta
        self.upper_level = upper_level
        self.nehari_residual = nehari_residual
        self.trace = trace
        self.path = path

    @property
    def norm(self):
        return math.sqrt(calculus.dirichlet_norm_sq(self.solution))

    def as_dict(self):
        return {'level': self.level,
                'gradient_norm': self.gradient_norm,
                'iterations': self.iterations,
                'below_threshold': self.below_threshold,
                'threshold': self.threshold,
                'concentration_index': self.concentration_index,
                'beta': self.beta,
                'upper_level': self.upper_level,
                'nehari_residual': self.nehari_residual,
                'norm': self.norm}


def _governing_threshold(params, consts):
    if consts is None:
        consts = sharp.sharp_constants(params.N, params.alpha, params.s)
    return sharp.ps_thresholds(params, consts).governing()


@profile.trackcpu
def mountain_pass_solve(params, config_=None, kernel=None, probe=None, consts=None, tag=None):
    """Find a mountain pass critical point of I on kernel's grid.

    probe defaults to a smooth bump; the path starts as the segment from 0 to
    e = e_scale * probe supplied by the geometry check."""

    if kernel is None:
        raise ValueError('mountain_pass_solve needs an assembled kernel matrix')
    cfg = config_ if config_ is not None else SolverConfig()
    logger = util.TaggingLogger(glogger, {'tag': tag}) if tag else glogger

    model = EnergyModel(params, kernel)
    if probe is None:
        probe = default_probe(model.grid)
    if consts is None:
        consts = sharp.sharp_constants(params.N, params.alpha, params.s)
    geometry = mp_geometry_check(params, probe, kernel, consts)

    e = geometry.endpoint.values
    fib = model.fiber(e)
    if fib.degenerate:
        raise DegeneratePath('the segment 0 -> e has no interior maximum')
    upper = fib.h_star
    path = PathState(model, e, 1.0, cfg.path_points)

    w = fib.t_star * e
    level = fib.h_star
    trace = []
    step = 0.0
    slack = 64.0 * numpy.finfo(float).eps

    for iteration in range(1, cfg.max_iters + 1):
        if iteration > 1 and path.max_index in (0, len(path) - 1):
            raise DegeneratePath('path maximum at endpoint index {0}'.format(path.max_index), trace, w)

        grad = model.gradient(w)
        direction = model.form.solve(grad)
        gnorm = math.sqrt(max(0.0, float(numpy.dot(grad, direction))))
        trace.append(TraceEntry(iteration, level, gnorm, step, w.copy()))

        if iteration % config.SOLVER_LOG_INTERVAL == 0:
            logger.info('iteration {0}: level {1:.12g}, gradient norm {2:.3g}'.format(iteration, level, gnorm))

        if gnorm <= cfg.tol:
            break
        if iteration == cfg.max_iters:
            raise NonConvergence('no convergence after {0} iterations (gradient norm {1:.3g})'.format(
                iteration, gnorm), trace, w)

        step = 1.0
        while True:
            moved = w - step * direction
            A, B, D = model.coefficients(moved)
            if A > 0:
                candidate = fiber_profile(A, B, D, params)
                if (not candidate.degenerate and
                        candidate.h_star <= level - cfg.armijo * step * gnorm ** 2 + slack * abs(level)):
                    break
            step *= cfg.backtracking
            if step < config.SOLVER_MIN_STEP:
                raise NonConvergence('line search stalled at iteration {0} (gradient norm {1:.3g})'.format(
                    iteration, gnorm), trace, w)
            logger.debug('iteration {0}: backtracking to step {1:.3g}'.format(iteration, step))

        w = candidate.t_star * moved
        level = candidate.h_star
        path = _ray_path(model, w, fiber_profile(*model.coefficients(w), params), cfg.path_points)

    solution = RadialFunction(model.grid, w)
    norm = model.norm(w)
    if norm < config.SOLVER_TRIVIAL_NORM:
        raise TrivialSolution('converged to the trivial critical point (||u*|| = {0:.3g})'.format(norm), trace, w)
    if not level > 0:
        raise DegeneratePath('mountain pass level {0} is not positive'.format(level), trace, w)

    threshold = _governing_threshold(params, consts)
    below = None if threshold is None else bool(level < threshold)
    nehari = abs(float(numpy.dot(model.gradient(w), w)))
    concentration = calculus.dirichlet_mass_fraction(solution, config.CONCENTRATION_FRACTION * params.radius)

    logger.info('converged after {0} iterations: level {1:.12g}, gradient norm {2:.3g}'.format(
        len(trace), level, trace[-1].gradient_norm))
    return MountainPassResult(solution, level, trace[-1].gradient_norm, len(trace), below, threshold,
                              concentration, geometry.beta, upper, nehari, trace, path)


class DiagnosticsReport(object):
    """Per-iteration levels, gradient norms and concentration indices
    (Dirichlet mass fraction in B(0, R 2^-j), j = 0..levels)."""

    def __init__(self, rows, concentration_suspected):
        self.rows = rows
        self.concentration_suspected = concentration_suspected

    def as_dict(self):
        return {'concentration_suspected': self.concentration_suspected, 'iterations': self.rows}


def ps_diagnostics(trace, grid, levels=config.CONCENTRATION_LEVELS, window=config.CONCENTRATION_WINDOW):
    if not trace:
        raise ValueError('empty solver trace')

    rows = []
    for entry in trace:
        u = RadialFunction(grid, entry.values, boundary=False)
        rows.append({'iteration': entry.iteration,
                     'level': entry.level,
                     'gradient_norm': entry.gradient_norm,
                     'concentration': [calculus.dirichlet_mass_fraction(u, grid.radius * 2.0 ** -j)
                                       for j in range(levels + 1)]})

    tail = rows[-window:]
    suspected = False
    if len(tail) >= 3:
        finest = numpy.array([row['concentration'][-1] for row in tail])
        growing = bool(numpy.all(numpy.diff(finest) >= -1e-12))
        first, last = tail[0]['gradient_norm'], tail[-1]['gradient_norm']
        stalled = last > 0 and first / last < config.STALL_FACTOR
        suspected = growing and finest[-1] >= config.CONCENTRATION_THRESHOLD and stalled

    return DiagnosticsReport(rows, suspected)


class LargeParameterReport(object):
    def __init__(self, parameter, witness, attempts, result):
        self.parameter = parameter
        self.witness = witness
        self.attempts = attempts
        self.result = result

    def as_dict(self):
        return {'parameter': self.parameter, 'witness': self.witness, 'attempts': self.attempts}


def large_parameter_search(params, config_, kernel, consts=None, steps=config.LARGE_PARAMETER_STEPS, tag=None):
    """For cases asking for a sufficiently large lambda (or mu): multiply it
    by 10 until a converged run lands below the threshold. The witness is
    the first such value, None if the search ran out of steps."""

    regime = classify_regime(params)
    name = regime.requires_large_parameter
    if name is None:
        raise ValueError('case {0} does not ask for a large parameter'.format(regime.case_id))
    if consts is None:
        consts = sharp.sharp_constants(params.N, params.alpha, params.s)

    value = params.lam if name == 'lambda' else params.mu
    attempts = []
    result = None
    for _ in range(steps + 1):
        trial = params.replace(lam=value) if name == 'lambda' else params.replace(mu=value)
        try:
            result = mountain_pass_solve(trial, config_, kernel, consts=consts, tag=tag)
        except SolverError as e:
            glogger.warning('{0} = {1:g}: {2}'.format(name, value, e))
            attempts.append({'value': value, 'level': None, 'below_threshold': None, 'error': str(e)})
        else:
            attempts.append({'value': value, 'level': result.level, 'below_threshold': result.below_threshold,
                             'error': None})
            if result.below_threshold:
                return LargeParameterReport(name, value, attempts, result)
        value *= 10.0

    return LargeParameterReport(name, None, attempts, result)
