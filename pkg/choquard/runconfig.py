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
Run configuration: a JSON document with the sections problem, grid, solver,
sweep and output, validated before anything is computed, plus command-line
overrides addressed by dotted path ("problem.mu", "grid.points").
"""

import logging
import numbers

import ujson

from radial import bubble, grid

from choquard import config
from choquard.params import ProblemParams
from choquard.solver import SolverConfig
from choquard.sweep import SweepConfig

__all__ = ('ConfigError', 'RunConfig', 'load_config', 'resolve_config', 'SCHEMA')

glogger = logging.getLogger("runconfig")


class ConfigError(ValueError):
    """Invalid run configuration; path is the dotted field that failed."""

    def __init__(self, path, message):
        super().__init__('{0}: {1}'.format(path, message))
        self.path = path


def _number(path, value):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ConfigError(path, 'expected a number, got {0!r}'.format(value))
    return float(value)


def _integer(path, value):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        if isinstance(value, float) and value.is_integer():
            return int(value)
        raise ConfigError(path, 'expected an integer, got {0!r}'.format(value))
    return int(value)


def _optional(check):
    def optional(path, value):
        return None if value is None else check(path, value)
    return optional


def _string(path, value):
    if not isinstance(value, str):
        raise ConfigError(path, 'expected a string, got {0!r}'.format(value))
    return value


def _family(path, value):
    if value not in bubble.FAMILIES:
        raise ConfigError(path, 'expected one of {0}, got {1!r}'.format(', '.join(bubble.FAMILIES), value))
    return value


def _ladder(path, value):
    if not isinstance(value, list):
        raise ConfigError(path, 'expected a list of eps values, got {0!r}'.format(value))
    return [_number('{0}[{1}]'.format(path, i), v) for i, v in enumerate(value)]


def _formats(path, value):
    if not isinstance(value, list):
        raise ConfigError(path, 'expected a list of formats, got {0!r}'.format(value))
    for i, v in enumerate(value):
        if v not in config.OUTPUT_FORMATS:
            raise ConfigError('{0}[{1}]'.format(path, i), 'expected one of {0}, got {1!r}'.format(
                ', '.join(config.OUTPUT_FORMATS), v))
    return list(value)


_REQUIRED = object()

# section -> key -> (checker, default)
SCHEMA = {
    'problem': {
        'N': (_integer, _REQUIRED),
        'alpha': (_number, _REQUIRED),
        's': (_number, _REQUIRED),
        'p': (_number, _REQUIRED),
        'q': (_number, _REQUIRED),
        'lambda': (_number, _REQUIRED),
        'mu': (_number, _REQUIRED),
        'radius': (_number, config.DEFAULT_RADIUS),
    },
    'grid': {
        'points': (_integer, config.GRID_POINTS),
        'grading': (_number, config.GRID_GRADING),
    },
    'solver': {
        'tol': (_number, config.SOLVER_TOL),
        'max_iters': (_integer, config.SOLVER_MAX_ITERS),
        'path_points': (_integer, config.SOLVER_PATH_POINTS),
        'backtracking': (_number, config.SOLVER_BACKTRACKING),
        'armijo': (_number, config.SOLVER_ARMIJO),
    },
    'sweep': {
        'ladder': (_optional(_ladder), None),
        'theta': (_optional(_number), None),
        'family': (_optional(_family), None),
        'k': (_number, 1.0),
        'cutoff': (_optional(_number), None),
        'points': (_integer, config.SWEEP_KERNEL_POINTS),
        'workers': (_integer, config.SWEEP_WORKERS),
    },
    'output': {
        'dir': (_string, config.OUTPUT_DIR),
        'formats': (_formats, list(config.OUTPUT_FORMATS)),
        'cache': (_optional(_string), None),
    },
}


class RunConfig(object):
    """A validated configuration. resolved holds the full document with every
    default filled in; it is what reports echo under "config"."""

    def __init__(self, resolved):
        self.resolved = resolved

        prob = resolved['problem']
        try:
            self.problem = ProblemParams(prob['N'], prob['alpha'], prob['s'], prob['p'], prob['q'],
                                         prob['lambda'], prob['mu'], radius=prob['radius'])
        except ValueError as e:
            raise ConfigError('problem', str(e))

        g = resolved['grid']
        if g['points'] < grid.MIN_POINTS:
            raise ConfigError('grid.points', 'need at least {0} points, got {1}'.format(grid.MIN_POINTS, g['points']))
        if g['grading'] < 1:
            raise ConfigError('grid.grading', 'grading exponent must be >= 1, got {0}'.format(g['grading']))
        self.grid_points = g['points']
        self.grid_grading = g['grading']

        self.solver = self._build('solver', SolverConfig, resolved['solver'])
        self.sweep = self._build('sweep', SweepConfig, resolved['sweep'])

        out = resolved['output']
        self.output_dir = out['dir']
        self.formats = tuple(out['formats'])
        self.cache_dir = out['cache']

    @staticmethod
    def _build(section, cls, values):
        try:
            return cls(**values)
        except ValueError as e:
            raise ConfigError(section, str(e))

    def make_grid(self):
        return grid.make_grid(self.problem.radius, self.grid_points, self.grid_grading, self.problem.N)

    def as_dict(self):
        return {section: dict(values) for section, values in self.resolved.items()}


def _set_path(doc, path, value):
    parts = path.split('.')
    if len(parts) != 2:
        raise ConfigError(path, 'overrides are addressed as section.key')
    doc.setdefault(parts[0], {})
    if not isinstance(doc[parts[0]], dict):
        raise ConfigError(parts[0], 'expected an object')
    doc[parts[0]][parts[1]] = value


def resolve_config(document, overrides=None):
    """Validate a configuration document (a dict) with overrides applied and
    return a RunConfig."""

    if not isinstance(document, dict):
        raise ConfigError('<root>', 'expected a JSON object')
    doc = {section: (dict(values) if isinstance(values, dict) else values) for section, values in document.items()}
    for path, value in sorted((overrides or {}).items()):
        if value is not None:
            _set_path(doc, path, value)

    resolved = {}
    for section, values in doc.items():
        if section not in SCHEMA:
            raise ConfigError(section, 'unknown section')
        if not isinstance(values, dict):
            raise ConfigError(section, 'expected an object')
        for key in values:
            if key not in SCHEMA[section]:
                raise ConfigError('{0}.{1}'.format(section, key), 'unknown key')

    for section, fields in SCHEMA.items():
        values = doc.get(section, {})
        out = {}
        for key, (check, default) in fields.items():
            path = '{0}.{1}'.format(section, key)
            if key in values:
                out[key] = check(path, values[key])
            elif default is _REQUIRED:
                raise ConfigError(path, 'missing required field')
            else:
                out[key] = list(default) if isinstance(default, list) else default
        resolved[section] = out

    return RunConfig(resolved)


def load_config(filename, overrides=None):
    """Read and validate a JSON configuration file; filename None means an
    empty document (everything from overrides and defaults)."""

    if filename is None:
        return resolve_config({}, overrides)

    try:
        with open(filename, 'r') as f:
            document = ujson.load(f)
    except OSError as e:
        raise ConfigError('<file>', 'cannot read {0}: {1}'.format(filename, e))
    except ValueError as e:
        raise ConfigError('<file>', 'malformed JSON in {0}: {1}'.format(filename, e))

    glogger.debug('Loaded configuration from {0}'.format(filename))
    return resolve_config(document, overrides)
