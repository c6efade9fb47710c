# -*- mode: python; indent-tabs-mode: nil -*-

import math

import numpy
import pytest

from choquard import ratefit, sweep
from choquard.constants import ps_thresholds, sharp_constants
from choquard.params import ProblemParams
from radial import bubble, calculus, quadrature
from radial.grid import make_geometric_grid


@pytest.fixture(scope='module')
def case3i():
    return ProblemParams(3, 1.0, 0.0, 4.5, 6.0, 1.0, 1.0)


@pytest.fixture(scope='module')
def case3i_table(case3i):
    return sweep.epsilon_sweep(case3i, sweep.SweepConfig(points=256))


def _ladder(first, last):
    return [2.0 ** -j for j in range(first, last + 1)]


def test_sweep_config_validation(case3i):
    with pytest.raises(ValueError):
        sweep.SweepConfig(ladder=[0.1, 0.2])
    with pytest.raises(ValueError):
        sweep.SweepConfig(ladder=[0.1, -0.2])
    with pytest.raises(ValueError):
        sweep.SweepConfig(family='gaussian')
    with pytest.raises(ValueError):
        sweep.SweepConfig(points=8)
    with pytest.raises(ValueError):
        sweep.SweepConfig(ladder=[2.0, 1.0]).epsilons(1.0)
    with pytest.raises(ValueError):
        sweep.SweepConfig(cutoff=0.75).rho(1.0)
    with pytest.raises(ValueError):
        sweep.SweepConfig(family='aubin_talenti').family_for(case3i)


def test_default_ladder():
    assert sweep.default_ladder(1.0) == _ladder(1, 8)
    cfg = sweep.SweepConfig()
    assert cfg.epsilons(2.0)[0] == 1.0
    assert cfg.rho(2.0) == 1.0


def test_family_from_regime(case1, case3i):
    cfg = sweep.SweepConfig()
    assert cfg.family_for(case3i) == 'hardy_sobolev'
    assert cfg.family_for(ProblemParams(3, 1.0, 1.0, 5.0, 3.0, 1.0, 1.0)) == 'aubin_talenti'
    assert cfg.family_for(case1) == 'hardy_sobolev'
    assert sweep.SweepConfig(family='aubin_talenti').family_for(case1) == 'aubin_talenti'


def test_sweep_columns(case3i_table):
    table = case3i_table
    assert len(table) == 8
    assert table.family == 'hardy_sobolev'
    assert table.rho == 0.5
    for name in ('kinetic', 'hardy_term', 'nonlocal_term', 't_star', 'h_star', 'margin',
                 'kinetic_defect', 'hardy_defect'):
        column = table.column(name)
        assert numpy.all(numpy.isfinite(column))
    for name in ('kinetic', 'hardy_term', 'nonlocal_term', 't_star'):
        assert numpy.all(table.column(name) > 0)
    lo, hi = table.t_star_bracket()
    assert 0 < lo <= hi
    assert len(list(table.as_rows())[0]) == len(sweep.COLUMNS)


def test_kinetic_and_hardy_approach_bubble_values(case3i_table):
    target = sharp_constants(3, 1.0, 0.0).hardy_sobolev_constant ** 1.5
    kinetic = numpy.abs(case3i_table.column('kinetic') / target - 1.0)
    hardy = numpy.abs(case3i_table.column('hardy_term') / target - 1.0)
    assert kinetic[-1] < kinetic[0]
    assert kinetic[-1] < 0.05
    assert hardy[-1] < 1e-3


def test_defect_rates(case3i, case3i_table):
    expected = ratefit.predictions(case3i, case3i_table.family)
    kinetic = ratefit.fit_rate(case3i_table, 'kinetic_defect', expected['kinetic_defect'])
    assert kinetic.slope == pytest.approx(1.0, abs=0.1)
    hardy = ratefit.fit_rate(case3i_table, 'hardy_defect', expected['hardy_defect'])
    assert hardy.slope == pytest.approx(3.0, abs=0.1)


def test_nonlocal_lower_rate(case3i, case3i_table):
    expected = ratefit.predictions(case3i, case3i_table.family)['nonlocal_term']
    assert expected.exponent == pytest.approx(0.5)
    fit = ratefit.fit_rate(case3i_table, 'nonlocal_term', expected)
    assert fit.slope >= 0.45
    assert fit.passed


def test_scaling_invariance_of_critical_terms():
    # with R/eps fixed the grid just dilates, so the critical terms do not move
    values = []
    for eps in (1.0, 0.1, 0.01):
        g = make_geometric_grid(100.0 * eps, 3000, 1e-4 * eps)
        u = bubble.eval_bubble(bubble.BubbleSpec('hardy_sobolev', eps, s=1.0), 3, g)
        values.append((calculus.dirichlet_integral(u), quadrature.hardy_weighted_integral(u, 4.0, 1.0)))
    for kinetic, hardy in values[1:]:
        assert kinetic == pytest.approx(values[0][0], rel=1e-6)
        assert hardy == pytest.approx(values[0][1], rel=1e-6)


def _hardy_rate(s, q, ladder):
    params = ProblemParams(3, 1.0, s, 2.0, q, 1.0, 1.0)
    cfg = sweep.SweepConfig(ladder=ladder, family='aubin_talenti', points=128)
    table = sweep.epsilon_sweep(params, cfg)
    expected = ratefit.predictions(params, table.family)['hardy_term']
    return ratefit.fit_rate(table, 'hardy_term', expected)


def test_hardy_rate_above_split():
    fit = _hardy_rate(0.0, 4.0, _ladder(4, 12))
    assert fit.expected.exponent == pytest.approx(1.0)
    assert not fit.log_factor_detected
    assert fit.passed


def test_hardy_rate_below_split():
    fit = _hardy_rate(0.5, 2.2, _ladder(12, 20))
    assert fit.expected.exponent == pytest.approx(1.1)
    assert not fit.log_factor_detected
    assert fit.passed


def test_hardy_rate_at_split_has_log_factor():
    fit = _hardy_rate(0.5, 2.5, _ladder(12, 20))
    assert fit.expected.exponent == pytest.approx(1.25)
    assert fit.expected.log_factor
    assert fit.log_factor_detected
    assert fit.passed


def test_hardy_defect_undefined_below_split():
    params = ProblemParams(3, 1.0, 0.5, 2.0, 2.2, 1.0, 1.0)
    table = sweep.epsilon_sweep(params, sweep.SweepConfig(ladder=_ladder(1, 4), points=64))
    assert numpy.all(numpy.isnan(table.column('hardy_defect')))
    assert numpy.all(numpy.isnan(table.column('margin')))
    assert table.threshold is None


def test_theta_couples_parameter():
    params = ProblemParams(3, 1.0, 0.0, 3.0, 6.0, 1.0, 1.0)
    table = sweep.epsilon_sweep(params, sweep.SweepConfig(ladder=_ladder(1, 4), theta=2.0, points=64))
    assert numpy.allclose(table.column('lambda'), table.epsilons ** -2.0)
    assert numpy.all(table.column('mu') == 1.0)


def test_theta_ignored_without_large_parameter(case1):
    table = sweep.epsilon_sweep(case1, sweep.SweepConfig(ladder=_ladder(1, 4), theta=2.0, points=64))
    assert numpy.all(table.column('lambda') == 1.0)


def test_level_bound_case3i(case3i):
    consts = sharp_constants(3, 1.0, 0.0)
    report = sweep.verify_level_bound(case3i, sweep.SweepConfig(points=256), ps_thresholds(case3i, consts))
    assert report.threshold_name == 'hardy_sobolev'
    assert report.threshold == pytest.approx(consts.sobolev_constant ** 1.5 / 3.0, rel=1e-12)
    assert numpy.all(report.margins[-3:] > 0)
    assert report.verified
    assert report.as_dict()['verdict'] == 'verified'


def test_level_bound_case4iii():
    params = ProblemParams(3, 1.0, 1.0, 5.0, 3.0, 1.0, 1.0)
    consts = sharp_constants(3, 1.0, 1.0)
    report = sweep.verify_level_bound(params, sweep.SweepConfig(points=256), ps_thresholds(params, consts))
    assert report.threshold_name == 'hls'
    assert report.table.family == 'aubin_talenti'
    assert report.verified


def test_level_bound_theta_below_bound():
    params = ProblemParams(3, 1.0, 0.0, 3.0, 6.0, 1.0, 1.0)
    consts = sharp_constants(3, 1.0, 0.0)
    cfg = sweep.SweepConfig(ladder=_ladder(1, 5), theta=0.5, points=64)
    report = sweep.verify_level_bound(params, cfg, ps_thresholds(params, consts))
    assert not report.verified
    assert report.verdict == 'not verified at this resolution'
    assert any('outside the bound' in w for w in report.warnings)


def test_level_bound_without_theta_warns():
    params = ProblemParams(3, 1.0, 0.0, 3.0, 6.0, 1.0, 1.0)
    consts = sharp_constants(3, 1.0, 0.0)
    cfg = sweep.SweepConfig(ladder=_ladder(1, 4), points=64)
    report = sweep.verify_level_bound(params, cfg, ps_thresholds(params, consts))
    assert any('no theta prescription' in w for w in report.warnings)


def test_level_bound_needs_threshold(case1):
    with pytest.raises(ValueError):
        sweep.verify_level_bound(case1, None, None)


def test_sweep_table_needs_decreasing_eps(case1):
    row = dict.fromkeys(sweep.COLUMNS, 1.0)
    with pytest.raises(ValueError):
        sweep.SweepTable(case1, 'hardy_sobolev', 0.5, None, [dict(row), dict(row)])
    assert math.isnan(sweep.SweepTable(case1, 'hardy_sobolev', 0.5, None, [dict(row, margin=math.nan)])
                      .column('margin')[0])


def _fake_sweep(margins):
    def fake(params, cfg, consts=None, thresholds=None, cache_dir=None):
        rows = []
        for j, m in enumerate(margins):
            row = dict.fromkeys(sweep.COLUMNS, 1.0)
            row.update(epsilon=2.0 ** -(j + 1), margin=m, h_star=1.0 - m)
            rows.append(row)
        return sweep.SweepTable(params, 'hardy_sobolev', 0.5, 1.0, rows)
    return fake


def test_level_bound_accepts_margins_shrinking_to_zero(monkeypatch, case3i):
    # the fibre maximum approaches the threshold from below as eps -> 0
    monkeypatch.setattr(sweep, 'epsilon_sweep', _fake_sweep([0.4, 0.2, 0.1, 0.05, 0.025]))
    report = sweep.verify_level_bound(case3i, None, None)
    assert numpy.all(numpy.diff(report.margins) < 0)
    assert report.verified


def test_level_bound_rejects_late_negative_margin(monkeypatch, case3i):
    monkeypatch.setattr(sweep, 'epsilon_sweep', _fake_sweep([0.4, 0.2, 0.1, -0.01, 0.025]))
    assert not sweep.verify_level_bound(case3i, None, None).verified


def test_level_bound_theta_above_log_window(monkeypatch):
    # case 4ii at q = (N-s)/(N-2): theta must lie in (0.5, 1.5)
    params = ProblemParams(3, 1.0, 0.0, 5.0, 3.0, 1.0, 1.0)
    monkeypatch.setattr(sweep, 'epsilon_sweep', _fake_sweep([0.4, 0.2, 0.1, 0.05]))

    report = sweep.verify_level_bound(params, sweep.SweepConfig(theta=1.5), None)
    assert not report.verified
    assert any('0.5 < theta < 1.5' in w for w in report.warnings)
    assert report.as_dict()['theta_bound']['upper'] == pytest.approx(1.5)

    assert sweep.verify_level_bound(params, sweep.SweepConfig(theta=1.0), None).verified
