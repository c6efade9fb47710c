# -*- mode: python; indent-tabs-mode: nil -*-

import pytest

from choquard.params import ProblemParams, classify_regime, derive_exponents, exponents_for


def test_exponent_algebra():
    e = exponents_for(3, 1.0, 0.0)
    assert e.upper_critical == 5.0
    assert e.lower_critical == pytest.approx(5.0 / 3.0, rel=1e-15)
    assert e.hardy_sobolev == 6.0
    assert e.sobolev == 6.0
    assert exponents_for(5, 1.0, 2.0).hardy_sobolev == 2.0
    assert exponents_for(4, 1.0, 0.0).hardy_best == 1.0


def test_derive_exponents_matches_params(case1):
    assert derive_exponents(case1).as_dict() == exponents_for(3, 1.0, 0.0).as_dict()


@pytest.mark.parametrize('bad', [
    dict(N=2), dict(alpha=3.0), dict(s=2.5), dict(p=1.0), dict(p=5.5), dict(q=6.5), dict(q=1.5),
    dict(lam=0.0), dict(mu=-1.0), dict(radius=0.0),
])
def test_params_rejected(bad):
    values = dict(N=3, alpha=1.0, s=0.0, p=2.0, q=4.0, lam=1.0, mu=1.0)
    values.update(bad)
    with pytest.raises(ValueError):
        ProblemParams(**values)


def test_degenerate_coefficients_need_strict_false():
    p = ProblemParams(3, 1.0, 0.0, 2.0, 4.0, 0.0, 1.0, strict=False)
    assert p.lam == 0.0
    with pytest.raises(ValueError):
        ProblemParams(3, 1.0, 0.0, 2.0, 4.0, 0.0, 0.0, strict=False)


def test_critical_exponents_tolerate_rounding():
    p = ProblemParams(3, 1.0, 0.0, 5.0 + 1e-12, 6.0, 1.0, 1.0)
    assert p.p_critical()
    assert p.q_critical()


def test_replace_and_dict_round_trip(case1):
    other = case1.replace(mu=0.5)
    assert other.mu == 0.5 and case1.mu == 1.0
    again = ProblemParams.from_dict(other.as_dict())
    assert again.as_dict() == other.as_dict()
    assert 'lambda' in again.as_dict()


@pytest.mark.parametrize('N, alpha, s, p, q, mu, case_id', [
    (3, 1.0, 0.5, 3.0, 4.0, 1.0, '1'),
    (4, 1.0, 2.0, 2.0, 2.0, 0.5, '2'),
    (3, 1.0, 0.0, 4.5, 6.0, 1.0, '3i'),
    (3, 1.0, 0.0, 3.0, 6.0, 1.0, '3ii'),
    (3, 1.0, 0.0, 5.0, 5.0, 1.0, '4i'),
    (3, 1.0, 0.0, 5.0, 3.0, 1.0, '4ii'),
    (3, 1.0, 1.0, 5.0, 3.0, 1.0, '4iii'),
    (4, 1.0, 0.5, 3.5, 3.0, 1.0, '4iv'),
    (3, 1.0, 0.0, 5.0, 6.0, 1.0, 'uncovered'),
    (3, 1.0, 2.0, 2.0, 2.0, 0.5, 'uncovered'),
    (4, 1.0, 0.0, 3.5, 3.0, 1.0, 'uncovered'),
    (3, 1.0, 0.5, 3.0, 2.0, 1.0, 'uncovered'),
])
def test_classify_regime(N, alpha, s, p, q, mu, case_id):
    regime = classify_regime(ProblemParams(N, alpha, s, p, q, 1.0, mu))
    assert regime.case_id == case_id
    assert regime.covered == (case_id != 'uncovered')


def test_regime_annotations():
    r3 = classify_regime(ProblemParams(3, 1.0, 0.0, 3.0, 6.0, 1.0, 1.0))
    assert r3.requires_large_parameter == 'lambda'
    assert r3.threshold == 'hardy_sobolev' and r3.family == 'hardy_sobolev'

    r4 = classify_regime(ProblemParams(3, 1.0, 0.0, 5.0, 3.0, 1.0, 1.0))
    assert r4.requires_large_parameter == 'mu'
    assert r4.threshold == 'hls' and r4.family == 'aubin_talenti'

    r1 = classify_regime(ProblemParams(3, 1.0, 0.0, 2.0, 4.0, 1.0, 1.0))
    assert r1.requires_large_parameter is None and not r1.critical
    assert r1.as_dict()['case_id'] == '1'


