# -*- mode: python; indent-tabs-mode: nil -*-

import os

import pytest
import ujson

from choquard import main

CASE1 = ['--N', '3', '--alpha', '1', '--s', '0', '--p', '2', '--q', '4', '--lambda', '1', '--mu', '1']


def run(*argv):
    return main.HarnessCommandLine().run(list(argv))


def load(path):
    with open(str(path)) as f:
        return ujson.load(f)


def test_constants(tmp_path):
    assert run('constants', *CASE1, '--out', str(tmp_path)) == main.EXIT_OK
    doc = load(tmp_path / 'constants.json')
    assert doc['exponents']['upper_critical'] == 5.0
    assert doc['regime']['case_id'] == '1'
    assert doc['config']['problem']['N'] == 3
    assert doc['theta_bound'] is None


def test_constants_case2(tmp_path):
    argv = ['--N', '4', '--alpha', '1', '--s', '2', '--p', '2', '--q', '2', '--lambda', '1', '--mu', '0.5']
    assert run('constants', *argv, '--out', str(tmp_path)) == main.EXIT_OK
    doc = load(tmp_path / 'constants.json')
    assert doc['regime']['case_id'] == '2'
    assert doc['constants']['hardy_sobolev_constant'] is None


def test_constants_are_deterministic(tmp_path):
    for name in ('a', 'b'):
        assert run('constants', *CASE1, '--out', str(tmp_path / name)) == main.EXIT_OK
    with open(str(tmp_path / 'a' / 'constants.json'), 'rb') as a, open(str(tmp_path / 'b' / 'constants.json'), 'rb') as b:
        first, second = a.read(), b.read()
    # the echoed output directory is the only difference
    assert first.replace(str(tmp_path / 'a').encode(), b'') == second.replace(str(tmp_path / 'b').encode(), b'')


def test_malformed_config(tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('{"problem": ')
    out = tmp_path / 'out'
    assert run('constants', '--config', str(path), '--out', str(out)) == main.EXIT_CONFIG
    assert not out.exists()


def test_missing_problem_field(tmp_path):
    assert run('constants', '--N', '3', '--out', str(tmp_path / 'out')) == main.EXIT_CONFIG


def test_solve_regime_gate(tmp_path):
    argv = ['--N', '3', '--alpha', '1', '--s', '2', '--p', '2', '--q', '2', '--lambda', '1', '--mu', '0.5']
    assert run('solve', *argv, '--out', str(tmp_path)) == main.EXIT_REGIME
    assert not os.listdir(str(tmp_path))


def test_solve_iteration_budget(tmp_path):
    assert run('solve', *CASE1, '--points', '64', '--max-iters', '1', '--out', str(tmp_path)) == main.EXIT_NUMERICAL
    assert (tmp_path / 'trace.csv').exists()
    doc = load(tmp_path / 'result.json')
    assert doc['status'] == 'NonConvergence'
    assert 'concentration_suspected' in doc['diagnostics']


def test_solve_case1(tmp_path):
    assert run('solve', *CASE1, '--points', '64', '--out', str(tmp_path)) == main.EXIT_OK
    doc = load(tmp_path / 'result.json')
    assert doc['status'] == 'converged'
    assert doc['result']['level'] > 0
    assert doc['result']['gradient_norm'] <= 1e-6
    with open(str(tmp_path / 'solution.csv')) as f:
        lines = f.read().splitlines()
    assert lines[0] == 'r,u'
    assert len(lines) == 65
    assert lines[-1].endswith(',0')


def test_threshold_needs_critical_case(tmp_path):
    assert run('threshold', *CASE1, '--out', str(tmp_path)) == main.EXIT_REGIME


def test_threshold_case3i(tmp_path):
    argv = ['--N', '3', '--alpha', '1', '--s', '0', '--p', '4.5', '--q', '6', '--lambda', '1', '--mu', '1']
    config = tmp_path / 'run.json'
    config.write_text('{"sweep": {"points": 128}}')
    assert run('threshold', *argv, '--config', str(config), '--out', str(tmp_path / 'out')) == main.EXIT_OK
    doc = load(tmp_path / 'out' / 'verdict.json')
    assert doc['verdict'] == 'verified'
    assert doc['regime']['case_id'] == '3i'
    assert (tmp_path / 'out' / 'margins.csv').exists()


def test_rates_needs_four_scales(tmp_path):
    config = tmp_path / 'run.json'
    config.write_text('{"sweep": {"ladder": [0.5, 0.25, 0.125]}}')
    assert run('rates', *CASE1, '--config', str(config), '--out', str(tmp_path / 'out')) == main.EXIT_CONFIG


def test_rates_reports_fits(tmp_path):
    argv = ['--N', '3', '--alpha', '1', '--s', '0', '--p', '4.5', '--q', '6', '--lambda', '1', '--mu', '1']
    config = tmp_path / 'run.json'
    config.write_text('{"sweep": {"points": 128}}')
    code = run('rates', *argv, '--config', str(config), '--out', str(tmp_path / 'out'))
    assert code == main.EXIT_OK
    doc = load(tmp_path / 'out' / 'rates.json')
    columns = {fit['column']: fit for fit in doc['rates']}
    assert set(columns) == {'kinetic_defect', 'hardy_defect', 'nonlocal_term'}
    assert columns['kinetic_defect']['verdict'] == 'pass'
    with open(str(tmp_path / 'out' / 'sweep.csv')) as f:
        assert f.readline().strip().split(',')[:3] == ['epsilon', 'kinetic', 'hardy_term']


def test_selftest(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run('selftest') == main.EXIT_OK
    doc = load(tmp_path / 'out' / 'selftest.json')
    assert doc['passed']
    assert doc['checks']['rate_fit']['fitted'] == pytest.approx(1.7, abs=1e-6)
