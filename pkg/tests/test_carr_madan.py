import math

import pytest

from heston_cfft import (DampingInfeasibleError, HestonParams,
                         carr_madan_prices, price_call)

from conftest import TAU, V0


def test_reference_strikes_match_oracle(ref_params):
    for strike in (80.0, 100.0, 120.0):
        center = math.log(strike / 100.0)
        strikes, prices = carr_madan_prices(100.0, V0, TAU, ref_params,
                                            center=center)
        assert strikes[1000] == pytest.approx(strike, rel=1e-12)
        ref = price_call(100.0, strike, V0, TAU, ref_params)
        assert abs(prices[1000] - ref) <= 1e-5


def test_moneyness_sweep_and_arbitrage_bound(ref_params):
    strikes, prices = carr_madan_prices(100.0, V0, TAU, ref_params)
    disc = math.exp(-ref_params.r * TAU)
    sel = [i for i in range(870, 1131, 20) if 0.5 <= strikes[i] / 100.0 <= 2.0]
    assert len(sel) >= 10
    for i in sel:
        ref = price_call(100.0, strikes[i], V0, TAU, ref_params)
        assert abs(prices[i] - ref) <= 1e-5
        assert prices[i] >= 100.0 - strikes[i] * disc - 1e-6


def test_small_strike_limit(ref_params):
    strikes, prices = carr_madan_prices(100.0, V0, TAU, ref_params)
    disc = math.exp(-ref_params.r * TAU)
    i = 60   # strike ~ 100*e^{-4.7}, deep in the money
    assert strikes[i] < 1.0
    assert prices[i] == pytest.approx(100.0 - strikes[i] * disc, abs=1e-4)


def test_error_insensitive_to_n(ref_params):
    ref = price_call(100.0, 100.0, V0, TAU, ref_params)
    errors = []
    for n in (2000, 4000, 8000):
        _, prices = carr_madan_prices(100.0, V0, TAU, ref_params, n=n)
        errors.append(abs(prices[n // 2] - ref))
    assert max(errors) <= 1e-5
    assert max(errors) - min(errors) <= 1e-6


def test_damping_requirements(ref_params):
    with pytest.raises(DampingInfeasibleError, match="alpha_c > 0"):
        carr_madan_prices(100.0, V0, TAU, ref_params, alpha_c=-1.0)
    explosive = HestonParams(kappa=3.0, theta=0.1, sigma=0.25, rho=0.5,
                             lambda_mpr=1.0, r=0.03)
    with pytest.raises(DampingInfeasibleError):
        carr_madan_prices(100.0, V0, 1.0, explosive, alpha_c=50.0)


def test_grid_validation(ref_params):
    with pytest.raises(ValueError):
        carr_madan_prices(100.0, V0, TAU, ref_params, n=1001)
