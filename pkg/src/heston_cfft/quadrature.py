"""Semi-closed-form pricer by adaptive quadrature of the Fourier integral.

This is the in-repo ground truth all FFT schemes are judged against:
P_i = 1/2 + (1/pi) * int_0^inf Re[exp(ipx) psi_i(p) / (ip)] dp, then
C = S*P1 - K*exp(-r*tau)*P2.

The semi-infinite integral is split three ways. On [0, small_p] the
integrand is replaced by its analytic p -> 0 limit x + E[x_T - x] (the
apparent 1/p singularity is removable). On [small_p, 1] plain adaptive
Gauss-Kronrod handles the mild region including the removable-singular
neighborhood. On [1, p_max] the oscillatory weight exp(ipx) is handed to
QUADPACK's sin/cos machinery so accuracy does not degrade for deep
in/out-of-the-money states. p_max comes from the exponential decay rate of
the kernel: at 40/d the discarded tail sits orders of magnitude below the
default tolerances.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .charfn import asymptotics, kernel_psi, psi_gradient
from .model import CoeffMode, HestonParams, Measure, MeasureCoefficients, coefficients

__all__ = ["QuadratureConfig", "QuadratureFailure", "prob", "prob_detail",
           "price_call", "price_call_detail", "OraclePrice"]

_FAIL_FACTOR = 1e4   # err estimate this many times above abs_tol -> failure


class QuadratureFailure(ArithmeticError):
    """Adaptive refinement did not reach the requested tolerance."""

    def __init__(self, message: str, err_estimate: float):
        self.err_estimate = err_estimate
        super().__init__(f"quadrature-failure: {message} (achieved {err_estimate:.3e})")


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    p_max: float | None = None     # effective truncation is never below 40/d
    small_p: float = 1e-8
    split: float = 1.0             # hand-off point to the oscillatory rule
    limit: int = 300               # max subintervals per quad call

    def __post_init__(self):
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.small_p <= 0.0:
            raise ValueError("small_p must be positive")


_DEFAULT_CFG = QuadratureConfig()


def _effective_p_max(cfg: QuadratureConfig, d: float) -> float:
    decay_aware = 40.0 / d if d > 0.0 else 200.0
    if cfg.p_max is None:
        return max(decay_aware, 50.0)
    return max(cfg.p_max, decay_aware)


def prob_detail(x: float, v: float, tau: float, coeffs: MeasureCoefficients,
                r: float, cfg: QuadratureConfig | None = None) -> tuple[float, float]:
    """Exercise probability under coeffs.measure and its error estimate.

    The value is returned unclipped; clipping to [0, 1] is a reporting
    concern only.
    """
    cfg = cfg or _DEFAULT_CFG
    d = asymptotics(v, coeffs, tau).d
    p_max = _effective_p_max(cfg, d)

    def integrand(p: float) -> float:
        w = np.exp(1j * p * x) * kernel_psi(p, 0.0, v, coeffs, tau, r)
        return w.imag / p

    def re_over_p(p: float) -> float:
        return kernel_psi(p, 0.0, v, coeffs, tau, r).real / p

    def im_over_p(p: float) -> float:
        return kernel_psi(p, 0.0, v, coeffs, tau, r).imag / p

    # p -> 0 limit of the integrand is x + E[x_T - x]
    drift = psi_gradient(0.0, 0.0, v, coeffs, tau, r)[0].imag
    total = cfg.small_p * (x + drift)
    err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, e = quad(integrand, cfg.small_p, cfg.split,
                      epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=cfg.limit)
        total += val
        err += e
        if x == 0.0:
            val, e = quad(im_over_p, cfg.split, p_max,
                          epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=cfg.limit)
            total += val
            err += e
        else:
            # Im(e^{ipx} psi) = Re(psi) sin(px) + Im(psi) cos(px)
            val, e = quad(re_over_p, cfg.split, p_max, weight="sin", wvar=x,
                          epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=cfg.limit)
            total += val
            err += e
            val, e = quad(im_over_p, cfg.split, p_max, weight="cos", wvar=x,
                          epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=cfg.limit)
            total += val
            err += e
    if err > _FAIL_FACTOR * cfg.abs_tol:
        raise QuadratureFailure(f"P_{coeffs.measure.value} at x={x}", err / np.pi)
    return 0.5 + total / np.pi, err / np.pi


def prob(x: float, v: float, tau: float, coeffs: MeasureCoefficients,
         r: float, cfg: QuadratureConfig | None = None) -> float:
    return prob_detail(x, v, tau, coeffs, r, cfg)[0]


@dataclass(frozen=True)
class OraclePrice:
    value: float
    err_estimate: float
    mode: CoeffMode


def price_call_detail(spot: float, strike: float, v: float, tau: float,
                      params: HestonParams, mode: CoeffMode = CoeffMode.CONSISTENT,
                      cfg: QuadratureConfig | None = None) -> OraclePrice:
    """C = S*P1 - K*exp(-r*tau)*P2 with propagated error estimate."""
    if spot <= 0.0 or strike <= 0.0:
        raise ValueError(f"spot and strike must be > 0, got {spot}, {strike}")
    x = np.log(spot / strike)
    p1, e1 = prob_detail(x, v, tau, coefficients(params, Measure.P1, mode), params.r, cfg)
    p2, e2 = prob_detail(x, v, tau, coefficients(params, Measure.P2, mode), params.r, cfg)
    disc = np.exp(-params.r * tau)
    value = spot * p1 - strike * disc * p2
    return OraclePrice(value=value, err_estimate=spot * e1 + strike * disc * e2,
                       mode=CoeffMode(mode))


def price_call(spot: float, strike: float, v: float, tau: float,
               params: HestonParams, mode: CoeffMode = CoeffMode.CONSISTENT,
               cfg: QuadratureConfig | None = None) -> float:
    return price_call_detail(spot, strike, v, tau, params, mode, cfg).value
