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
Top level command line object, arg parsing and the commands.
"""

import argparse
import logging
import math

from choquard import config, profile, util
from choquard import constants as sharp
from choquard import output, ratefit, runconfig, solver, sweep
from choquard.energy import GeometryError, build_kernel
from choquard.params import classify_regime, exponents_for

__all__ = ('HarnessCommandLine', 'EXIT_OK', 'EXIT_CONFIG', 'EXIT_NUMERICAL', 'EXIT_REGIME')

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_REGIME = 4

COMMANDS = ('constants', 'solve', 'rates', 'threshold', 'selftest')

# command line flag -> configuration path
OVERRIDES = (
    ('N', 'problem.N', int),
    ('alpha', 'problem.alpha', float),
    ('s', 'problem.s', float),
    ('p', 'problem.p', float),
    ('q', 'problem.q', float),
    ('lambda', 'problem.lambda', float),
    ('mu', 'problem.mu', float),
    ('radius', 'problem.radius', float),
    ('points', 'grid.points', int),
    ('grading', 'grid.grading', float),
    ('max_iters', 'solver.max_iters', int),
    ('out', 'output.dir', str),
)

glogger = logging.getLogger("cli")


class HarnessCommandLine(object):
    """The choquard-harness command line.

    Derive from this if you want to add options, etc.
    """

    def add_problem_args(self, parser):
        parser.add_argument('--N', type=int, help="space dimension (integer >= 3)")
        parser.add_argument('--alpha', type=float, help="Riesz kernel exponent, 0 < alpha < N")
        parser.add_argument('--s', type=float, help="Hardy weight exponent, 0 <= s <= 2")
        parser.add_argument('--p', type=float, help="Choquard power")
        parser.add_argument('--q', type=float, help="Hardy-Sobolev power")
        parser.add_argument('--lambda', dest='lambda', type=float, help="coefficient of the Choquard term")
        parser.add_argument('--mu', type=float, help="coefficient of the Hardy term")
        parser.add_argument('--radius', type=float, help="radius of the ball domain")

    def add_numerics_args(self, parser):
        parser.add_argument('--points', type=int, help="number of grid nodes M")
        parser.add_argument('--grading', type=float, help="power grading of the grid towards the origin")
        parser.add_argument('--max-iters', dest='max_iters', type=int, help="solver iteration budget")
        parser.add_argument('--hls-ratio',
                            help="also compute S_HL by nested quadrature (constants command; slow)",
                            action='store_true',
                            default=False)

    def add_output_args(self, parser):
        parser.add_argument('--out', help="directory for report files")

    def add_util_args(self, parser):
        parser.add_argument('--config', help="JSON run configuration")
        parser.add_argument('--verbose', help="log debug messages", action='store_true', default=False)
        parser.add_argument('--quiet', help="log warnings and errors only", action='store_true', default=False)
        parser.add_argument('--tag',
                            help="set process name prefix (requires setproctitle module)",
                            default='choquard-harness')

    def make_arg_parser(self):
        parser = argparse.ArgumentParser(description="Numerics for the Choquard-Hardy-Sobolev problem.")
        parser.add_argument('command', choices=COMMANDS, help="what to run")

        self.add_problem_args(parser.add_argument_group('Problem'))
        self.add_numerics_args(parser.add_argument_group('Numerics'))
        self.add_output_args(parser.add_argument_group('Output'))
        self.add_util_args(parser.add_argument_group('Utility options'))

        return parser

    def overrides(self, args):
        return {path: getattr(args, flag) for flag, path, _ in OVERRIDES if getattr(args, flag) is not None}

    def run(self, argv=None):
        args = self.make_arg_parser().parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        elif args.quiet:
            logging.getLogger().setLevel(logging.WARNING)

        util.setproctitle('{0} {1}'.format(args.tag, args.command))

        try:
            if args.command == 'selftest':
                cfg = None
                if args.config is not None:
                    cfg = runconfig.load_config(args.config, self.overrides(args))
            else:
                cfg = runconfig.load_config(args.config, self.overrides(args))
        except runconfig.ConfigError as e:
            glogger.error('Invalid configuration: {0}'.format(e))
            return EXIT_CONFIG

        try:
            return getattr(self, 'cmd_' + args.command)(cfg, args)
        finally:
            profile.dump_cpu_profiles()

    def outputs(self, cfg):
        return output.OutputSet(cfg.output_dir, cfg.formats, cfg.as_dict())

    def cmd_constants(self, cfg, args):
        params = cfg.problem
        consts = sharp.sharp_constants(params.N, params.alpha, params.s, with_ratio=args.hls_ratio)
        regime = classify_regime(params)
        bound = sharp.theta_lower_bound(params)

        report = {'exponents': params.exponents.as_dict(),
                  'constants': consts.as_dict(),
                  'thresholds': sharp.ps_thresholds(params, consts).as_dict(),
                  'regime': regime.as_dict(),
                  'theta_bound': None if bound is None else bound.as_dict()}
        self.outputs(cfg).json('constants.json', report)
        glogger.info('case {0}: {1}'.format(regime.case_id, regime.reason))
        return EXIT_OK

    def cmd_solve(self, cfg, args):
        params = cfg.problem
        regime = classify_regime(params)
        if not regime.covered:
            glogger.error('regime gate: {0}'.format(regime.reason))
            return EXIT_REGIME

        out = self.outputs(cfg)
        kernel = build_kernel(cfg.make_grid(), params.alpha, cfg.cache_dir)
        consts = sharp.sharp_constants(params.N, params.alpha, params.s)
        report = {'regime': regime.as_dict()}

        try:
            result = solver.mountain_pass_solve(params, cfg.solver, kernel, consts=consts, tag=args.tag)
        except GeometryError as e:
            glogger.error('mountain pass geometry failed: {0}'.format(e))
            report.update(status='geometry_failed', error=str(e), diagnostics=e.diagnostics)
            out.json('result.json', report)
            return EXIT_NUMERICAL
        except solver.SolverError as e:
            glogger.error('solver failed: {0}'.format(e))
            report.update(status=type(e).__name__, error=str(e))
            if e.trace:
                self.write_trace(out, e.trace)
                report['diagnostics'] = solver.ps_diagnostics(e.trace, kernel.grid).as_dict()
            out.json('result.json', report)
            return EXIT_NUMERICAL

        report.update(status='converged', result=result.as_dict())
        if regime.critical:
            report['diagnostics'] = solver.ps_diagnostics(result.trace, kernel.grid).as_dict()
        if regime.requires_large_parameter is not None and not result.below_threshold:
            search = solver.large_parameter_search(params, cfg.solver, kernel, consts=consts, tag=args.tag)
            report['large_parameter'] = search.as_dict()

        out.csv('solution.csv', ('r', 'u'), result.solution.rows())
        self.write_trace(out, result.trace)
        out.json('result.json', report)
        return EXIT_OK

    def write_trace(self, out, trace):
        out.csv('trace.csv', ('iteration', 'level', 'gradient_norm', 'step'),
                ((e.iteration, e.level, e.gradient_norm, e.step) for e in trace))

    def check_sweep(self, cfg):
        params = cfg.problem
        try:
            cfg.sweep.family_for(params)
            cfg.sweep.rho(params.radius)
            return cfg.sweep.epsilons(params.radius)
        except ValueError as e:
            glogger.error('Invalid configuration: sweep: {0}'.format(e))
            return None

    def cmd_rates(self, cfg, args):
        params = cfg.problem
        epsilons = self.check_sweep(cfg)
        if epsilons is None:
            return EXIT_CONFIG
        if len(epsilons) < config.FIT_MIN_POINTS:
            glogger.error('Invalid configuration: sweep.ladder: rate fits need at least {0} eps values'.format(
                config.FIT_MIN_POINTS))
            return EXIT_CONFIG

        out = self.outputs(cfg)
        try:
            table = sweep.epsilon_sweep(params, cfg.sweep, cache_dir=cfg.cache_dir)
        except sweep.SweepError as e:
            glogger.error('sweep failed: {0}'.format(e))
            return EXIT_NUMERICAL
        out.csv('sweep.csv', sweep.COLUMNS, table.as_rows())

        fits = []
        notes = []
        for column, prediction in sorted(ratefit.predictions(params, table.family).items()):
            fits.append(ratefit.fit_rate(table, column, prediction))
            if column == 'hardy_term' and prediction.reason == 'q < (N-s)/(N-2)':
                notes.append('hardy_term: the third rate regime is read as q < (N-s)/(N-2), where the '
                             'whole-space weighted tail diverges')

        report = {'family': table.family,
                  't_star_bracket': list(table.t_star_bracket()),
                  'rates': [f.as_dict() for f in fits],
                  'notes': notes}
        out.json('rates.json', report)

        if any(f.inconclusive for f in fits):
            return EXIT_NUMERICAL
        return EXIT_OK

    def cmd_threshold(self, cfg, args):
        params = cfg.problem
        regime = classify_regime(params)
        if regime.threshold is None:
            glogger.error('regime gate: case {0} has no critical threshold to verify'.format(regime.case_id))
            return EXIT_REGIME

        if self.check_sweep(cfg) is None:
            return EXIT_CONFIG

        consts = sharp.sharp_constants(params.N, params.alpha, params.s, k=cfg.sweep.k)
        thresholds = sharp.ps_thresholds(params, consts)
        try:
            report = sweep.verify_level_bound(params, cfg.sweep, thresholds, cache_dir=cfg.cache_dir)
        except sweep.SweepError as e:
            glogger.error('sweep failed: {0}'.format(e))
            return EXIT_NUMERICAL

        notes = []
        if regime.case_id == '4iv':
            notes.append('case 4iv: the level bound is checked on the full range 2 < q < 2^*(s); '
                         'the narrower range 2 < q < 2(2-s)/(N-2) is empty for N >= 4')

        out = self.outputs(cfg)
        out.csv('margins.csv', ('epsilon', 'margin', 'h_star', 't_star', 'lambda', 'mu'),
                ((r['epsilon'], r['margin'], r['h_star'], r['t_star'], r['lambda'], r['mu'])
                 for r in report.table.rows))
        document = report.as_dict()
        document['regime'] = regime.as_dict()
        document['thresholds'] = thresholds.as_dict()
        document['notes'] = notes
        out.json('verdict.json', document)
        return EXIT_OK

    def cmd_selftest(self, cfg, args):
        checks = {}

        fit, ok = ratefit.synthetic_selftest()
        checks['rate_fit'] = {'fitted': fit.slope, 'expected': 1.7, 'ok': ok}

        e = exponents_for(3, 1.0, 0.0)
        ok = e.upper_critical == 5.0 and e.sobolev == 6.0 and exponents_for(3, 1.0, 2.0).hardy_sobolev == 2.0
        checks['exponents'] = {'upper_critical': e.upper_critical, 'sobolev': e.sobolev, 'ok': ok}

        consts = sharp.sharp_constants(3, 1.0, 0.0, with_ratio=True)
        defect = consts.relation_defect()
        checks['hls_relation'] = {'relation_defect': defect, 'ok': defect <= 1e-4}

        S = consts.sobolev_constant
        mu0 = consts.hardy_sobolev_constant
        checks['sobolev_identity'] = {'sobolev_constant': S, 'hardy_sobolev_constant_s0': mu0,
                                      'ok': math.isclose(S, mu0, rel_tol=1e-8)}

        passed = all(c['ok'] for c in checks.values())
        for name, c in sorted(checks.items()):
            (glogger.info if c['ok'] else glogger.error)('self-test {0}: {1}'.format(
                name, 'ok' if c['ok'] else 'FAILED'))

        if cfg is not None:
            out = self.outputs(cfg)
        else:
            out = output.OutputSet(config.OUTPUT_DIR, config.OUTPUT_FORMATS, None)
        out.json('selftest.json', {'checks': checks, 'passed': passed})
        return EXIT_OK if passed else EXIT_NUMERICAL
