import pytest

from heston_cfft import CoeffMode, HestonParams, Measure, coefficients

# Reference configuration used throughout: r=3%, v0=0.1, lambda=1,
# rho=-0.8, kappa=3, theta=0.1, sigma=0.25, one year to expiry.
V0 = 0.1
TAU = 1.0


@pytest.fixture(scope="session")
def ref_params() -> HestonParams:
    return HestonParams(kappa=3.0, theta=0.1, sigma=0.25, rho=-0.8,
                        lambda_mpr=1.0, r=0.03)


@pytest.fixture(scope="session")
def coeffs_p1(ref_params):
    return coefficients(ref_params, Measure.P1, CoeffMode.CONSISTENT)


@pytest.fixture(scope="session")
def coeffs_p2(ref_params):
    return coefficients(ref_params, Measure.P2, CoeffMode.CONSISTENT)
