"""Analytic truncation/discretization error bounds and empirical rate fits.

The bound for the convolution estimate of E[f(x_T)|x] on an n-point,
length-l grid is

    eps_1 * exp(-pi*d*n/l) + eps_2 * n^(-m),
    eps_1 = l*a_inf*fbar*exp(2*pi*d/l)/(pi*d) * eps_vt,
    eps_2 = l*a_inf*eps_l*eps_vt/(pi*d),

with d and a_inf the kernel's large-frequency decay constants and m >= 2
the quadrature order of the trapezoid coefficient rule. The envelope
constant eps_vt and the coefficient constant eps_l are existence constants,
not given numbers: eps_vt is calibrated by scanning |psi| against its decay
envelope and eps_l from one measured error sample. The price-level bound
multiplies by K(e^x + e^{-r*tau}), which is what makes the growth toward
the right boundary explicit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .carr_madan import carr_madan_prices
from .charfn import asymptotics, log_kernel_psi
from .engine import ShiftDampConfig, ShiftScheme, cfft1_price, cfft2_price
from .grids import build_grid
from .model import CoeffMode, HestonParams, MeasureCoefficients

__all__ = ["ErrorBoundInputs", "truncation_bound", "discretization_bound",
           "price_error_bound", "calibrate_envelope_constant",
           "calibrate_coefficient_constant", "empirical_order", "OrderFit"]


@dataclass(frozen=True)
class ErrorBoundInputs:
    eps_vt: float          # kernel envelope constant
    eps_l: float           # Fourier-coefficient discretization constant
    m: int                 # discretization order, >= 2 for trapezoid weights
    fbar: float            # sup of the transformed target on the interval
    a_inf: float
    d: float
    length: float
    n: int

    def __post_init__(self):
        problems = []
        for name in ("eps_vt", "eps_l", "fbar", "a_inf", "d", "length"):
            if not getattr(self, name) > 0.0:
                problems.append(f"{name} must be > 0")
        if self.m < 2:
            problems.append("m must be >= 2")
        if self.n < 0:
            problems.append("n must be >= 0")
        if problems:
            raise ValueError("; ".join(problems))


def truncation_bound(inputs: ErrorBoundInputs) -> float:
    """eps_1 * exp(-pi*d*n/l); vanishingly small (or exactly 0.0 in floating
    point) for realistic n."""
    eps_1 = (inputs.length * inputs.a_inf * inputs.fbar
             * math.exp(2.0 * math.pi * inputs.d / inputs.length)
             / (math.pi * inputs.d) * inputs.eps_vt)
    exponent = -math.pi * inputs.d * inputs.n / inputs.length
    try:
        tail = math.exp(exponent)
    except OverflowError:
        tail = math.inf
    return eps_1 * tail


def discretization_bound(inputs: ErrorBoundInputs) -> float:
    """eps_2 * n^(-m)."""
    eps_2 = (inputs.length * inputs.a_inf * inputs.eps_l * inputs.eps_vt
             / (math.pi * inputs.d))
    if inputs.n == 0:
        return math.inf
    return eps_2 * inputs.n ** (-float(inputs.m))


def price_error_bound(x: float, strike: float, r: float, tau: float,
                      inputs: ErrorBoundInputs) -> float:
    """K(e^x + e^{-r*tau}) times the probability-level bound."""
    return strike * (math.exp(x) + math.exp(-r * tau)) * (
        truncation_bound(inputs) + discretization_bound(inputs))


def calibrate_envelope_constant(v: float, coeffs: MeasureCoefficients, tau: float,
                                r: float, p_lo: float = 50.0, p_hi: float = 200.0,
                                num: int = 601) -> float:
    """max over the scan window of |psi(p, 0)| / (a_inf * exp(-d|p|)).

    Computed through the kernel exponent so the ratio survives |psi|
    underflow at large p.
    """
    env = asymptotics(v, coeffs, tau)
    p = np.linspace(p_lo, p_hi, num)
    log_ratio = (np.real(log_kernel_psi(p, 0.0, v, coeffs, tau, r))
                 + env.d * np.abs(p) - math.log(env.a_inf))
    return float(np.exp(log_ratio.max()))


def calibrate_coefficient_constant(measured_err: float, x: float, strike: float,
                                   r: float, tau: float,
                                   inputs: ErrorBoundInputs) -> float:
    """Solve price_error_bound(...) = measured_err for eps_l, holding the
    other inputs (including the calibration n) fixed."""
    prefactor = strike * (math.exp(x) + math.exp(-r * tau))
    resid = measured_err / prefactor - truncation_bound(inputs)
    if resid <= 0.0:
        raise ValueError("measured error is below the truncation term; "
                         "cannot attribute it to discretization")
    eps_2 = resid * inputs.n ** float(inputs.m)
    return eps_2 * math.pi * inputs.d / (inputs.length * inputs.a_inf * inputs.eps_vt)


@dataclass(frozen=True)
class OrderFit:
    method: str
    ns: tuple[int, ...]
    errors: tuple[float, ...]
    slope: float               # fitted order (-d log err / d log n); nan if degenerate
    intercept: float
    residuals: tuple[float, ...]
    degenerate: bool           # errors at numerical noise, no meaningful fit


def empirical_order(method: str, ns: list[int], *, strike: float, spot: float,
                    v: float, tau: float, params: HestonParams,
                    mode: CoeffMode = CoeffMode.CONSISTENT, length: float = 10.0,
                    shift_cfg: ShiftDampConfig | None = None,
                    region: float | None = None) -> OrderFit:
    """Run ``method`` across grid sizes, measure the error against the
    quadrature oracle, and least-squares fit log(err) against log(n).

    ``region = None`` measures at the grid center (the requested pricing
    point); a positive value takes the max over probe nodes within
    ``region`` of the center along the method's natural curve: varying spot
    for the convolution schemes, varying strike for the log-strike
    baseline. ``method = "oracle"`` compares the oracle to itself, which is
    flagged degenerate instead of fitted.
    """
    oracle_cache: dict[tuple[float, float], float] = {}

    def oracle_at(s: float, k: float) -> float:
        key = (round(s, 12), round(k, 12))
        if key not in oracle_cache:
            oracle_cache[key] = quadrature.price_call(s, k, v, tau, params, mode)
        return oracle_cache[key]

    offsets = [0.0] if region is None else list(np.linspace(-region, region, 9))
    errors = []
    for n in ns:
        if method == "oracle":
            errors.append(0.0)
            continue
        errs = []
        if method == "carr_madan":
            alpha_c = 2.0 if shift_cfg is None else abs(shift_cfg.alpha)
            grid = build_grid(math.log(strike / spot), length, n)
            strikes, prices = carr_madan_prices(
                spot=spot, v=v, tau=tau, params=params, mode=mode,
                center=grid.center, length=length, n=n, alpha_c=alpha_c)
            for off in offsets:
                idx = min(max(n // 2 + int(round(off / grid.dx)), 0), n - 1)
                errs.append(abs(prices[idx] - oracle_at(spot, strikes[idx])))
        else:
            grid = build_grid(math.log(spot / strike), length, n)
            if method == "cfft1":
                cfg = shift_cfg or ShiftDampConfig(ShiftScheme.LINEAR, 0.0)
                curve = cfft1_price(grid, strike, v, tau, params, mode, cfg)
            elif method == "cfft2":
                cfg = shift_cfg or ShiftDampConfig(ShiftScheme.EXPONENTIAL, -2.0)
                curve = cfft2_price(grid, strike, v, tau, params, mode, cfg)
            else:
                raise ValueError(f"unknown method {method!r}")
            for off in offsets:
                idx = min(max(n // 2 + int(round(off / grid.dx)), 0), n)
                x_node = grid.closed_x_nodes[idx]
                errs.append(abs(curve[idx] - oracle_at(strike * math.exp(x_node), strike)))
        errors.append(max(errs))

    errors_t = tuple(float(e) for e in errors)
    floor = 1e-14 * max(strike, spot)
    if method == "oracle" or all(e <= floor for e in errors_t):
        return OrderFit(method, tuple(ns), errors_t, float("nan"), float("nan"),
                        tuple(0.0 for _ in ns), True)
    log_n = np.log(np.asarray(ns, dtype=float))
    log_e = np.log(np.maximum(errors_t, 1e-300))
    coeffs_fit = np.polyfit(log_n, log_e, 1)
    fitted = np.polyval(coeffs_fit, log_n)
    return OrderFit(method, tuple(ns), errors_t, float(-coeffs_fit[0]),
                    float(coeffs_fit[1]), tuple(float(x) for x in (log_e - fitted)),
                    False)
