# -*- mode: python; indent-tabs-mode: nil -*-

import math

import numpy
import pytest

from choquard import energy
from choquard.constants import sharp_constants
from choquard.params import ProblemParams
from radial.function import RadialFunction
from radial.grid import make_grid


@pytest.fixture(scope='module')
def critical_params():
    # p = 2_a^* in N = 3, alpha = 1, Hardy term with s = 1
    return ProblemParams(3, 1.0, 1.0, 5.0, 3.0, 1.0, 1.0)


def _bump(grid):
    return energy.default_probe(grid)


def test_zero_energy(case1, small_grid, small_kernel):
    zero = RadialFunction.zeros(small_grid)
    parts = energy.energy(zero, case1, small_kernel)
    assert (parts.kinetic, parts.nonlocal_, parts.hardy, parts.total) == (0.0, 0.0, 0.0, 0.0)
    assert not numpy.any(energy.energy_gradient(zero, case1, small_kernel))


def test_homogeneity(case1, small_grid, small_kernel):
    u = _bump(small_grid)
    t = 1.7
    a = energy.energy(u, case1, small_kernel)
    b = energy.energy(u.scaled(t), case1, small_kernel)
    assert b.kinetic == pytest.approx(t ** 2 * a.kinetic, rel=1e-12)
    assert b.nonlocal_ == pytest.approx(t ** (2 * case1.p) * a.nonlocal_, rel=1e-12)
    assert b.hardy == pytest.approx(t ** case1.q * a.hardy, rel=1e-12)


def test_small_bump_has_positive_energy(case1, small_grid, small_kernel):
    u = _bump(small_grid).scaled(1e-3)
    parts = energy.energy(u, case1, small_kernel)
    assert parts.total > 0
    assert parts.total == pytest.approx(parts.kinetic, rel=1e-3)


def test_energy_needs_boundary_value(case1, small_grid, small_kernel):
    u = RadialFunction(small_grid, numpy.ones(len(small_grid)), boundary=False)
    with pytest.raises(ValueError):
        energy.energy(u, case1, small_kernel)


def test_model_checks_kernel(case1, small_kernel):
    with pytest.raises(ValueError):
        energy.EnergyModel(case1.replace(alpha=2.0), small_kernel)
    with pytest.raises(ValueError):
        energy.EnergyModel(case1.replace(radius=2.0), small_kernel)


def test_gradient_matches_central_differences(critical_params, small_grid, small_kernel):
    model = energy.EnergyModel(critical_params, small_kernel)
    rng = numpy.random.default_rng(7)
    envelope = 1.0 - small_grid.nodes ** 2
    r = small_grid.nodes
    for _ in range(20):
        a, b = rng.uniform(-1.0, 1.0, size=2)
        u = envelope * (1.0 + 0.4 * a * numpy.cos(math.pi * r))
        phi = envelope * (1.0 + 0.5 * numpy.cos(b + 3.0 * r))
        g = model.gradient(u)
        exact = numpy.dot(g, phi)

        errors = []
        for delta in (1e-2, 1e-3):
            fd = (model.total(u + delta * phi) - model.total(u - delta * phi)) / (2 * delta)
            errors.append(abs(fd - exact))
        assert errors[1] <= 1e-2 * max(1.0, abs(exact))
        assert math.log10(errors[0] / errors[1]) == pytest.approx(2.0, abs=0.3)


def test_fiber_with_hardy_term_only():
    params = ProblemParams(3, 1.0, 0.0, 2.0, 4.0, 1.0, 1.0)
    fib = energy.fiber_profile(1.0, 0.0, 1.0, params)
    assert fib.t_star == pytest.approx(1.0, rel=1e-12)
    assert fib.h_star == pytest.approx(0.25, rel=1e-12)
    assert not fib.degenerate
    assert fib.h_prime(fib.t_star) == pytest.approx(0.0, abs=1e-12)


def test_fiber_with_nonlocal_term_only():
    params = ProblemParams(3, 1.0, 0.0, 2.0, 4.0, 1.0, 1.0)
    fib = energy.fiber_profile(1.0, 1.0, 0.0, params)
    assert fib.t_star == pytest.approx(1.0, rel=1e-12)
    assert fib.h_star == pytest.approx(0.25, rel=1e-12)


def test_fiber_maximum_scales():
    params = ProblemParams(3, 1.0, 0.0, 2.0, 4.0, 1.0, 2.0)
    fib = energy.fiber_profile(3.0, 0.5, 0.7, params)
    assert fib.h(fib.t_star) >= fib.h(numpy.linspace(0.0, 3.0 * fib.t_star, 301)).max() - 1e-12
    assert fib.samples.shape == (energy.FiberProfile.SAMPLES, 2)


def test_degenerate_fiber():
    params = ProblemParams(3, 1.0, 2.0, 2.0, 2.0, 1.0, 0.5)
    fib = energy.fiber_profile(1.0, 1.0, 3.0, params)
    assert fib.degenerate
    assert fib.t_star == 0.0 and fib.h_star == 0.0

    with pytest.raises(ValueError):
        energy.fiber_profile(0.0, 1.0, 1.0, params)


def test_fiber_max_of_zero(case1, small_grid, small_kernel):
    with pytest.raises(ValueError):
        energy.fiber_max(RadialFunction.zeros(small_grid), case1, small_kernel)


def test_fiber_scaling_lies_on_nehari_manifold(case1, small_grid, small_kernel):
    u = _bump(small_grid)
    fib = energy.fiber_max(u, case1, small_kernel)
    w = u.scaled(fib.t_star)
    norm_sq = energy.EnergyModel(case1, small_kernel).norm(w) ** 2
    assert energy.nehari_residual(w, case1, small_kernel) <= 1e-9 * norm_sq
    assert energy.energy(w, case1, small_kernel).total == pytest.approx(fib.h_star, rel=1e-12)


def test_norm_ball_lower_bound(case1):
    consts = sharp_constants(3, 1.0, 0.0)
    rho = numpy.geomspace(1e-4, 10.0, 50)
    bound = energy.norm_ball_lower_bound(case1, consts, rho)
    assert bound[0] > 0
    assert bound[-1] < 0


def test_geometry_case1(case1, small_grid, small_kernel):
    probe = _bump(small_grid)
    report = energy.mp_geometry_check(case1, probe, small_kernel)
    rho, beta, e_scale = report
    assert beta > 0 and rho > 0
    assert report.certified == 'sphere'
    assert energy.energy(report.endpoint, case1, small_kernel).total < 0
    for t in (2.0, 10.0):
        assert energy.energy(probe.scaled(t * e_scale), case1, small_kernel).total < 0


def test_geometry_fails_above_hardy_constant():
    # s = 2 with mu = 2 * (N-2)^2/4: the Hardy term beats the Dirichlet
    # energy of a profile close to the Hardy extremal r^(-1/2)
    params = ProblemParams(3, 1.0, 2.0, 2.0, 2.0, 1.0, 0.5)
    g = make_grid(1.0, 256, 4.0)
    r0 = 1e-4
    probe = RadialFunction.from_callable(g, lambda r: numpy.maximum(r, r0) ** -0.5 - 1.0)
    kernel = energy.build_kernel(g, 1.0)
    with pytest.raises(energy.GeometryError) as exc:
        energy.mp_geometry_check(params, probe, kernel)
    assert exc.value.diagnostics['max_sphere_bound'] <= 0
