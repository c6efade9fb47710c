# -*- mode: python; indent-tabs-mode: nil -*-

import numpy
import pytest

from choquard import solver
from choquard.constants import sharp_constants
from choquard.energy import build_kernel, default_probe
from choquard.params import ProblemParams
from radial import bubble
from radial.grid import make_grid


@pytest.fixture(scope='module')
def case1_result(case1, small_kernel):
    return solver.mountain_pass_solve(case1, solver.SolverConfig(), small_kernel)


def test_solver_config_validation():
    with pytest.raises(ValueError):
        solver.SolverConfig(tol=0.0)
    with pytest.raises(ValueError):
        solver.SolverConfig(max_iters=0)
    with pytest.raises(ValueError):
        solver.SolverConfig(path_points=4)
    with pytest.raises(ValueError):
        solver.SolverConfig(backtracking=1.0)
    assert solver.SolverConfig(max_iters=10).as_dict()['max_iters'] == 10


def test_error_hierarchy():
    for cls in (solver.NonConvergence, solver.DegeneratePath, solver.TrivialSolution):
        assert issubclass(cls, solver.SolverError)


def test_needs_kernel(case1):
    with pytest.raises(ValueError):
        solver.mountain_pass_solve(case1)


def test_case1_converges(case1_result):
    r = case1_result
    assert r.gradient_norm <= 1e-6
    assert r.level > 0
    assert r.beta <= r.level <= r.upper_level + 1e-12
    assert r.nehari_residual <= 1e-6 * r.norm ** 2
    assert r.below_threshold is None and r.threshold is None
    assert numpy.all(r.solution.values[:-1] > 0)
    assert r.solution.values[-1] == 0.0


def test_levels_decrease_along_trace(case1_result):
    levels = [entry.level for entry in case1_result.trace]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(levels, levels[1:]))


def test_final_path_peaks_inside(case1_result):
    path = case1_result.path
    assert 0 < path.max_index < len(path) - 1
    assert path.end_energy < 0


def test_level_converges_under_refinement(case1):
    consts = sharp_constants(3, 1.0, 0.0)
    levels = []
    for M in (128, 256):
        kernel = build_kernel(make_grid(1.0, M, 2.0), 1.0)
        levels.append(solver.mountain_pass_solve(case1, None, kernel, consts=consts).level)
    assert abs(levels[0] - levels[1]) <= 1e-3 * levels[1]


@pytest.mark.slow
def test_case1_at_full_resolution(case1):
    # M = 512 is the default grid; doubling it must leave the level in place
    consts = sharp_constants(3, 1.0, 0.0)
    results = []
    for M in (512, 1024):
        kernel = build_kernel(make_grid(1.0, M, 2.0), 1.0)
        results.append(solver.mountain_pass_solve(case1, None, kernel, consts=consts))

    r = results[0]
    assert r.gradient_norm <= 1e-6
    assert r.beta <= r.level <= r.upper_level + 1e-12
    assert r.nehari_residual <= 1e-6 * r.norm ** 2
    assert abs(results[1].level - r.level) <= 1e-3 * results[1].level


@pytest.fixture(scope='module')
def case3i_run():
    # q = 2^*(0) = 6 with 2_a^* - 1 < p < 2_a^*: compactness below S^(3/2)/3
    params = ProblemParams(3, 1.0, 0.0, 4.5, 6.0, 1.0, 1.0)
    kernel = build_kernel(make_grid(1.0, 128, 2.0), 1.0)
    return solver.mountain_pass_solve(params, None, kernel), kernel


def test_critical_case_converges_below_threshold(case3i_run):
    r, _ = case3i_run
    S = sharp_constants(3, 1.0, 0.0).sobolev_constant
    assert r.threshold == pytest.approx(S ** 1.5 / 3.0, rel=1e-12)
    assert r.below_threshold is True
    assert 0 < r.level < r.threshold
    assert r.gradient_norm <= solver.SolverConfig().tol
    assert numpy.all(r.solution.values[:-1] > 0)


def test_critical_case_trace_does_not_concentrate(case3i_run):
    r, kernel = case3i_run
    report = solver.ps_diagnostics(r.trace, kernel.grid)
    assert len(report.rows) == len(r.trace)
    assert not report.concentration_suspected


def test_pure_power_level_matches_nehari_minimum(small_grid, small_kernel):
    # lambda = 0 leaves -Delta u = mu u^3 on the ball: the mountain pass level
    # is (1/2 - 1/q) mu^(-2/(q-2)) (min A / D^(2/q))^(q/(q-2))
    params = ProblemParams(3, 1.0, 0.0, 2.0, 4.0, 0.0, 1.0, strict=False)
    result = solver.mountain_pass_solve(params, None, small_kernel)

    import scipy.optimize
    from radial.calculus import DirichletForm
    from radial.quadrature import hardy_weights

    q = params.q
    form = DirichletForm(small_grid)
    n = len(small_grid) - 1
    stiffness = numpy.diag(form.diag[:n]) + numpy.diag(form.off[:n - 1], 1) + numpy.diag(form.off[:n - 1], -1)
    chol = numpy.linalg.cholesky(stiffness)
    weights = hardy_weights(small_grid, 0.0)[:n]

    def quotient(z):
        v = numpy.linalg.solve(chol.T, z)
        D = numpy.dot(weights, numpy.abs(v) ** q)
        A = numpy.dot(z, z)
        grad_D = numpy.linalg.solve(chol, q * weights * numpy.sign(v) * numpy.abs(v) ** (q - 1))
        value = A / D ** (2.0 / q)
        grad = 2.0 * z / D ** (2.0 / q) - A * (2.0 / q) * D ** (-2.0 / q - 1.0) * grad_D
        return value, grad

    z0 = numpy.dot(chol.T, default_probe(small_grid).values[:n])
    best = scipy.optimize.minimize(quotient, z0, jac=True, method='L-BFGS-B',
                                   options={'gtol': 1e-12, 'ftol': 1e-15, 'maxiter': 20000})
    expected = (0.5 - 1.0 / q) * best.fun ** (q / (q - 2.0))
    assert result.level == pytest.approx(expected, rel=1e-4)


def test_iteration_budget(case1, small_kernel):
    with pytest.raises(solver.NonConvergence) as exc:
        solver.mountain_pass_solve(case1, solver.SolverConfig(max_iters=1), small_kernel)
    assert len(exc.value.trace) == 1
    assert exc.value.best is not None


def test_diagnostics_of_subcritical_run(case1_result, small_grid):
    report = solver.ps_diagnostics(case1_result.trace, small_grid)
    assert not report.concentration_suspected
    assert len(report.rows) == len(case1_result.trace)
    row = report.rows[-1]
    assert len(row['concentration']) == 6
    assert row['concentration'][0] == 1.0
    assert row['concentration'][-1] < 0.5


def test_diagnostics_empty_trace(small_grid):
    with pytest.raises(ValueError):
        solver.ps_diagnostics([], small_grid)


def _shrinking_bubble_trace(grid, gradient_norms):
    trace = []
    for i, gnorm in enumerate(gradient_norms):
        spec = bubble.BubbleSpec('aubin_talenti', 0.02 * 0.85 ** i, cutoff_inner=0.5)
        values = numpy.array(bubble.eval_bubble(spec, 3, grid).values)
        trace.append(solver.TraceEntry(i + 1, 1.0, gnorm, 0.5, values))
    return trace


def test_diagnostics_flag_concentrating_bubble():
    grid = make_grid(1.0, 2000, 3.0)
    trace = _shrinking_bubble_trace(grid, [0.5] * 25)
    report = solver.ps_diagnostics(trace, grid)
    assert report.concentration_suspected
    finest = [row['concentration'][-1] for row in report.rows]
    assert finest[-1] > 0.9


def test_diagnostics_ignore_converging_iteration():
    grid = make_grid(1.0, 2000, 3.0)
    trace = _shrinking_bubble_trace(grid, [0.5 * 0.5 ** i for i in range(25)])
    assert not solver.ps_diagnostics(trace, grid).concentration_suspected


def test_large_parameter_search_needs_large_parameter_case(case1, small_kernel):
    with pytest.raises(ValueError):
        solver.large_parameter_search(case1, None, small_kernel)


class _FakeResult(object):
    def __init__(self, level, below):
        self.level = level
        self.below_threshold = below


def test_large_parameter_search_multiplies_by_ten(monkeypatch, small_kernel):
    params = ProblemParams(3, 1.0, 0.0, 3.0, 6.0, 1.0, 1.0)
    seen = []

    def fake_solve(trial, config_, kernel, consts=None, tag=None):
        seen.append(trial.lam)
        if trial.lam < 50:
            raise solver.NonConvergence('not yet')
        return _FakeResult(1.0, trial.lam >= 1000)

    monkeypatch.setattr(solver, 'mountain_pass_solve', fake_solve)
    report = solver.large_parameter_search(params, None, small_kernel, consts=sharp_constants(3, 1.0, 0.0))
    assert seen == [1.0, 10.0, 100.0, 1000.0]
    assert report.parameter == 'lambda'
    assert report.witness == 1000.0
    assert report.attempts[0]['error'] == 'not yet'
    assert report.attempts[2]['below_threshold'] is False


def test_large_parameter_search_gives_up(monkeypatch, small_kernel):
    params = ProblemParams(3, 1.0, 0.0, 5.0, 3.0, 1.0, 1.0)
    monkeypatch.setattr(solver, 'mountain_pass_solve',
                        lambda trial, config_, kernel, consts=None, tag=None: _FakeResult(1.0, False))
    report = solver.large_parameter_search(params, None, small_kernel, consts=sharp_constants(3, 1.0, 0.0), steps=2)
    assert report.parameter == 'mu'
    assert report.witness is None
    assert [a['value'] for a in report.attempts] == [1.0, 10.0, 100.0]
