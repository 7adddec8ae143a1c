import math

import numpy as np
import pytest

import drivenpacket as dp


def s1_phase_oracle(p, k, t):
    # independent quadrature of the S1 symbol in closed form
    s2 = math.sin(2.0 * p.omega * t)
    return (
        p.hbar * k**2 * t / (2.0 * p.m)
        - (k * p.A / (p.m * p.omega**2)) * (math.cos(p.omega * t) - 1.0)
        + (p.A**2 / (2.0 * p.m * p.hbar * p.omega**2)) * (t / 2.0 - s2 / (4.0 * p.omega))
    )


def s3_shift_oracle(p, t):
    # closed-form integral of the affine characteristic equation
    w = p.omega
    return (p.A / (5.0 * p.hbar * w)) * (
        math.exp(-0.5 * w * t) * (2.0 * math.cos(w * t) + math.sin(w * t)) - 2.0
    )


def test_diagonal_symbols_at_time_zero(natural_params):
    k = np.linspace(-4, 4, 9)
    free = 0.5 * natural_params.hbar**2 * k**2 / natural_params.m
    assert np.allclose(dp.diagonal_symbol("S1", natural_params, k, 0.0), free, atol=1e-15)
    assert np.allclose(dp.diagonal_symbol("S2", natural_params, k, 0.0), free, atol=1e-15)
    assert np.allclose(dp.diagonal_symbol("S3", natural_params, k, 0.0), 0.0, atol=1e-15)


def test_symbol_variants_differ_off_natural_units():
    p = dp.PhysicalParams(m=1.3, A=1.7, omega=0.9)
    k = np.linspace(-4, 4, 9)
    t = 2.0
    d1 = dp.diagonal_symbol("S1", p, k, t, "derived") - dp.diagonal_symbol("S1", p, k, t, "published")
    expected = (1.7**2 - 1.7) / (2 * 1.3 * 0.9**2) * math.sin(0.9 * t) ** 2
    assert np.allclose(d1, expected, rtol=1e-12)
    d2 = dp.diagonal_symbol("S2", p, k, t, "derived") - dp.diagonal_symbol("S2", p, k, t, "published")
    assert np.max(np.abs(d2)) > 0.0


def test_symbol_variants_coincide_in_natural_units(natural_params):
    k = np.linspace(-4, 4, 9)
    for scheme in ("S1", "S2", "S3"):
        a = dp.diagonal_symbol(scheme, natural_params, k, 1.3, "derived")
        b = dp.diagonal_symbol(scheme, natural_params, k, 1.3, "published")
        assert np.allclose(a, b, atol=1e-14)


def test_s1_keeps_modulus(natural_params, packet):
    grid = dp.build_grid(-16, 16, 513)
    profile = dp.gaussian_profile_fn(packet)
    initial = np.abs(dp.gaussian_profile_values(packet, grid.points))
    for t in (0.8, 3.3, 6.0):
        state = dp.evolve_scheme("S1", profile, grid, natural_params, t, "derived")
        assert np.max(np.abs(np.abs(state.values) - initial)) <= 1e-12


def test_s1_phase_matches_quadrature_oracle(natural_params, packet):
    grid = dp.build_grid(-16, 16, 513)
    profile = dp.gaussian_profile_fn(packet)
    t = 2.4
    state = dp.evolve_scheme("S1", profile, grid, natural_params, t, "derived")
    expected = dp.gaussian_profile_values(packet, grid.points) * np.exp(
        -1j * s1_phase_oracle(natural_params, grid.points, t)
    )
    assert np.max(np.abs(state.values - expected)) < 1e-9


def test_derived_phase_helper_matches_oracle():
    p = dp.PhysicalParams(m=1.3, A=1.7, omega=0.9, hbar=0.8)
    k = np.linspace(-5, 5, 11)
    t = 1.9
    expected = np.array([s1_phase_oracle(p, kk, t) for kk in k])
    assert np.max(np.abs(dp.derived_phase_s1(p, k, t) - expected)) < 1e-10


def test_s2_density_is_rigid_drift(natural_params, packet):
    grid = dp.build_grid(-24, 24, 1024)
    profile = dp.gaussian_profile_fn(packet)
    for t in (0.9, 2.5):
        state = dp.evolve_scheme("S2", profile, grid, natural_params, t, "derived")
        shifted = np.abs(
            dp.gaussian_profile_values(
                packet, grid.points + natural_params.A * t / natural_params.hbar
            )
        ) ** 2
        assert np.max(np.abs(state.density() - shifted)) < 1e-8


def test_s2_peak_drifts_linearly(natural_params, packet):
    grid = dp.build_grid(-24, 24, 1024)
    profile = dp.gaussian_profile_fn(packet)
    t = 3.0
    state = dp.evolve_scheme("S2", profile, grid, natural_params, t, "derived")
    k_peak = grid.points[np.argmax(state.density())]
    expected = packet.k0 - natural_params.A * t / natural_params.hbar
    assert abs(k_peak - expected) <= grid.spacing


def test_s3_map_examples(natural_params):
    m0 = dp.scheme3_char_map(natural_params, 0.0)
    assert m0.scale == 1.0
    assert m0.shift == 0.0

    free = dp.PhysicalParams(m=1.0, A=0.0, omega=1.0)
    mf = dp.scheme3_char_map(free, 1.3)
    assert mf.scale == pytest.approx(math.exp(-0.65), rel=1e-14)
    assert abs(mf.shift) < 1e-14


def test_s3_map_shift_matches_closed_form(natural_params):
    for t in (0.5, math.pi, 2.0 * math.pi):
        got = dp.scheme3_char_map(natural_params, t).shift
        assert abs(got - s3_shift_oracle(natural_params, t)) < 1e-9


def test_s3_map_published_deviation_at_half_period(natural_params):
    t = math.pi
    derived = dp.scheme3_char_map(natural_params, t, variant="derived")
    published = dp.scheme3_char_map(natural_params, t, variant="published")
    assert published.shift == pytest.approx(-0.8, abs=1e-15)
    assert abs(derived.shift - published.shift) == pytest.approx(0.3168481694596952, abs=1e-9)


def test_s3_norm_conserved(natural_params, packet):
    # the -w/4 amplitude term must exactly offset the e^{w t/2} stretching
    grid = dp.build_grid(-40, 40, 1024)
    profile = dp.gaussian_profile_fn(packet)
    for t in (0.5, 1.2, 2.0):
        state = dp.evolve_scheme("S3", profile, grid, natural_params, t, "derived")
        assert abs(dp.norm(state) - 1.0) < 1e-6


def test_s3_published_amplitude_grows(natural_params, packet):
    grid = dp.build_grid(-40, 40, 1024)
    profile = dp.gaussian_profile_fn(packet)
    t = 1.0
    state = dp.evolve_scheme("S3", profile, grid, natural_params, t, "published")
    assert dp.norm(state) == pytest.approx(math.exp(natural_params.omega * t), rel=1e-6)


def test_s2_published_equals_derived_in_natural_units(natural_params, packet):
    grid = dp.build_grid(-24, 24, 513)
    profile = dp.gaussian_profile_fn(packet)
    t = 1.6
    derived = dp.evolve_scheme("S2", profile, grid, natural_params, t, "derived")
    published = dp.evolve_scheme("S2", profile, grid, natural_params, t, "published")
    aligned = dp.align_global_phase(derived.values, published.values)
    assert np.max(np.abs(derived.values - aligned)) < 1e-9


def test_s2_published_deviates_off_natural_units(packet):
    p = dp.PhysicalParams(m=1.3, A=1.7, omega=0.9)
    grid = dp.build_grid(-28, 28, 513)
    profile = dp.gaussian_profile_fn(packet)
    t = 1.6
    derived = dp.evolve_scheme("S2", profile, grid, p, t, "derived")
    published = dp.evolve_scheme("S2", profile, grid, p, t, "published")
    aligned = dp.align_global_phase(derived.values, published.values)
    mask = np.abs(derived.values) > 1e-6
    assert np.max(np.abs(np.angle(derived.values[mask] / aligned[mask]))) > 1e-3


def test_weyl_generator_residual_small_at_t_zero(natural_params, packet):
    grid = dp.build_grid(-16, 16, 2048)
    state = dp.gaussian_profile(packet, grid)
    residual = dp.weyl_generator_check(natural_params, 0.0, state)
    assert residual <= 1e-6


def test_weyl_generator_residual_refines(natural_params, packet):
    coarse = dp.weyl_generator_check(
        natural_params, 0.4, dp.gaussian_profile(packet, dp.build_grid(-16, 16, 256))
    )
    fine = dp.weyl_generator_check(
        natural_params, 0.4, dp.gaussian_profile(packet, dp.build_grid(-16, 16, 512))
    )
    assert coarse / fine > 20.0  # sixth-order stencil: ideal ratio 64


def test_s3_flow_fixed_point_without_drive():
    # with A = 0 the advection coefficient vanishes at k = 0, so a profile
    # flat around the origin feels no transport there
    free = dp.PhysicalParams(m=1.0, A=0.0, omega=1.0)
    problem = dp.scheme_problem("S3", free, lambda k: np.ones_like(np.asarray(k, float)))
    assert problem.alpha(np.array([0.0]), 1.7)[0] == 0.0
    flat = np.ones(64, dtype=complex)
    assert np.max(np.abs(dp.first_derivative(flat, 0.1))) < 1e-12


def test_uncertainty_bounds():
    assert dp.uncertainty_bound(dp.PhysicalParams(m=1.0)) == 0.5
    assert dp.uncertainty_bound(dp.PhysicalParams(m=2.0)) == 0.25
    assert dp.published_uncertainty_bound(dp.PhysicalParams(m=2.0)) == 0.5


def test_minimal_gaussian_attains_robertson_bound(natural_params, packet):
    grid = dp.build_grid(-16, 16, 1024)
    ms = dp.moments(dp.gaussian_profile(packet, grid), natural_params)
    assert ms.sigma_x * ms.sigma_v == pytest.approx(
        dp.uncertainty_bound(natural_params), abs=1e-8
    )


def test_scheme_validation(natural_params, packet):
    grid = dp.build_grid(-8, 8, 64)
    profile = dp.gaussian_profile_fn(packet)
    with pytest.raises(ValueError):
        dp.evolve_scheme("S4", profile, grid, natural_params, 1.0)
    with pytest.raises(ValueError):
        dp.evolve_scheme("S1", profile, grid, natural_params, 1.0, variant="printed")
