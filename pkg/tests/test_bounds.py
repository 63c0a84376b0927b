import math

import pytest

from heston_cfft import (ErrorBoundInputs, asymptotics,
                         calibrate_coefficient_constant,
                         calibrate_envelope_constant, discretization_bound,
                         empirical_order, price_error_bound, truncation_bound)

from conftest import TAU, V0

R = 0.03


def make_inputs(**overrides):
    base = dict(eps_vt=1.0, eps_l=1.0, m=2, fbar=1.0, a_inf=5.755,
                d=0.96, length=10.0, n=2000)
    base.update(overrides)
    return ErrorBoundInputs(**base)


def test_truncation_negligible_for_realistic_grids():
    # exponent -pi*0.96*2000/10 ~ -603.2; direct evaluation gives 3.8e-261
    bound = truncation_bound(make_inputs())
    assert 0.0 <= bound < 1e-250
    # doubling n squares the tail, which does underflow to exactly 0
    assert truncation_bound(make_inputs(n=8000)) == 0.0


def test_truncation_degenerate_and_doubling():
    inputs0 = make_inputs(n=0)
    eps_1 = truncation_bound(inputs0)
    assert eps_1 == pytest.approx(
        10.0 * 5.755 * math.exp(2 * math.pi * 0.96 / 10.0) / (math.pi * 0.96))
    b1 = truncation_bound(make_inputs(n=20))
    b2 = truncation_bound(make_inputs(n=40))
    assert b2 == pytest.approx(b1 * b1 / eps_1, rel=1e-12)


def test_discretization_power_law():
    b1 = discretization_bound(make_inputs(n=1000))
    b2 = discretization_bound(make_inputs(n=2000))
    assert b2 / b1 == pytest.approx(0.25, rel=1e-12)
    # eps_2 = 1 exactly when eps_l = pi d / (l a_inf eps_vt)
    unit = make_inputs(eps_l=math.pi * 0.96 / (10.0 * 5.755))
    assert discretization_bound(unit) == pytest.approx(2000.0 ** -2, rel=1e-12)
    assert discretization_bound(unit) == pytest.approx(2.5e-7, rel=1e-3)


def test_reference_error_pair_implies_second_order():
    assert math.log2(2.60e-4 / 6.50e-5) == pytest.approx(2.0, abs=1e-2)


def test_price_bound_prefactors():
    inputs = make_inputs()
    base = price_error_bound(0.0, 100.0, 0.0, TAU, inputs)
    level = truncation_bound(inputs) + discretization_bound(inputs)
    assert base == pytest.approx(2.0 * 100.0 * level, rel=1e-12)
    ratio = (price_error_bound(5.0, 100.0, R, TAU, inputs)
             / price_error_bound(0.0, 100.0, R, TAU, inputs))
    expected = (math.exp(5.0) + math.exp(-R * TAU)) / (1.0 + math.exp(-R * TAU))
    assert ratio == pytest.approx(expected, rel=1e-12)


def test_discretization_dominates_for_reference_configuration():
    for n in (100, 500, 2000, 8000):
        inputs = make_inputs(n=n)
        assert truncation_bound(inputs) < discretization_bound(inputs)


def test_inputs_validation():
    with pytest.raises(ValueError, match="m must be >= 2"):
        make_inputs(m=1)
    with pytest.raises(ValueError, match="d must be > 0"):
        make_inputs(d=0.0)


def test_envelope_constant_magnitude(coeffs_p2):
    # the leading-order envelope drops O(1) exponent constants (dominated by
    # b*a*tau/sigma^2 = 15.6 here), so the realized constant is large
    eps_vt = calibrate_envelope_constant(V0, coeffs_p2, TAU, R)
    assert 1e3 <= eps_vt <= 1e9
    wider = calibrate_envelope_constant(V0, coeffs_p2, TAU, R, p_lo=50.0,
                                        p_hi=400.0, num=1401)
    assert wider >= eps_vt


def test_coefficient_calibration_roundtrip(coeffs_p2):
    env = asymptotics(V0, coeffs_p2, TAU)
    seed = ErrorBoundInputs(eps_vt=2e7, eps_l=1.0, m=2, fbar=1.0,
                            a_inf=env.a_inf, d=env.d, length=10.0, n=2000)
    measured = 2.60e-4
    eps_l = calibrate_coefficient_constant(measured, 0.0, 100.0, R, TAU, seed)
    closed = ErrorBoundInputs(eps_vt=2e7, eps_l=eps_l, m=2, fbar=1.0,
                              a_inf=env.a_inf, d=env.d, length=10.0, n=2000)
    assert price_error_bound(0.0, 100.0, R, TAU, closed) == pytest.approx(
        measured, rel=1e-12)


def test_empirical_order_second_order_at_the_money(ref_params):
    fit = empirical_order("cfft2", [2000, 4000, 8000], strike=100.0, spot=100.0,
                          v=V0, tau=TAU, params=ref_params)
    assert not fit.degenerate
    assert fit.slope == pytest.approx(2.0, abs=0.5)
    assert fit.errors[0] > fit.errors[1] > fit.errors[2]


def test_empirical_order_low_strike_errors_track_reference(ref_params):
    # frozen damped-scheme errors for K=80: 5.93e-5, 8.04e-6, 4.60e-6
    fit = empirical_order("cfft2", [2000, 4000, 8000], strike=80.0, spot=100.0,
                          v=V0, tau=TAU, params=ref_params)
    for err, ref in zip(fit.errors, (5.93e-5, 8.04e-6, 4.60e-6)):
        assert err <= 3.0 * ref and err >= ref / 3.0
    assert fit.errors[0] > fit.errors[1] > fit.errors[2]


def test_empirical_order_oracle_self_comparison_flagged(ref_params):
    fit = empirical_order("oracle", [512, 1024], strike=100.0, spot=100.0,
                          v=V0, tau=TAU, params=ref_params)
    assert fit.degenerate
    assert math.isnan(fit.slope)
    assert max(fit.errors) == 0.0


def test_empirical_order_interior_region(ref_params):
    fit = empirical_order("cfft2", [1000, 2000], strike=100.0, spot=100.0,
                          v=V0, tau=TAU, params=ref_params, region=0.5)
    assert fit.errors[0] > fit.errors[1]
    assert fit.slope == pytest.approx(2.0, abs=0.5)


def test_empirical_order_rejects_unknown_method(ref_params):
    with pytest.raises(ValueError, match="unknown method"):
        empirical_order("cos", [512], strike=100.0, spot=100.0, v=V0, tau=TAU,
                        params=ref_params)
