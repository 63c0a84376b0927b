"""Convolution-FFT pricing schemes with boundary-control damping/shifting.

Scheme I estimates the exercise probabilities by convolving the Heaviside
target with the increment kernel on a truncated centered grid; scheme II
prices the call directly by damping the payoff with exp(alpha*x)
(alpha < -1) and evaluating the kernel at the complex-shifted frequencies
p + i*alpha. Both subtract a shift function h (linear for I, exponential
for II) whose conditional expectation is known in closed form, transform
the remainder, and add the expectation back; that removes the wrap-around
discontinuity of the periodized target and is what controls the boundary
error.

Grids carry n transform samples plus the right endpoint of the closed
interval. Target sampling, shifting and the returned curves all live on the
n+1 closed nodes; the transform consumes the first n samples and the value
at the right endpoint reuses the periodic wrap of the convolution with the
recovery term evaluated at the true endpoint.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .charfn import SingularFrequencyError, kernel_psi, psi_gradient
from .grids import Grid, dft_centered_values, idft_centered_values, trapezoid_weights
from .model import CoeffMode, HestonParams, Measure, MeasureCoefficients, coefficients

__all__ = [
    "ShiftScheme", "ShiftDampConfig", "ShiftCoefficients",
    "DampingInfeasibleError", "linear_shift", "exponential_shift",
    "damping_feasible", "cfft1_prob", "cfft1_price", "cfft2_price",
    "heaviside_samples", "call_payoff_samples",
]


class DampingInfeasibleError(ArithmeticError):
    pass


class ShiftScheme(enum.Enum):
    NONE = "none"
    LINEAR = "linear"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class ShiftDampConfig:
    """Boundary-control selection. The linear scheme runs undamped
    (alpha = 0); the exponential scheme requires alpha < -1 so the damped
    payoff tail is integrable."""

    shift: ShiftScheme = ShiftScheme.NONE
    alpha: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "shift", ShiftScheme(self.shift))
        if self.shift is ShiftScheme.LINEAR and self.alpha != 0.0:
            raise ValueError(f"linear shift runs with alpha = 0, got {self.alpha}")
        if self.shift is ShiftScheme.EXPONENTIAL and not self.alpha < -1.0:
            raise DampingInfeasibleError(
                "damping-infeasible precondition: alpha < -1")


@dataclass(frozen=True)
class ShiftCoefficients:
    a: float
    b: float
    scheme: ShiftScheme


_NO_SHIFT = ShiftCoefficients(0.0, 0.0, ShiftScheme.NONE)


def heaviside_samples(grid: Grid) -> np.ndarray:
    """Indicator of x >= 0 on the closed nodes; the node at x = 0 gets 1."""
    return (grid.closed_x_nodes >= 0.0).astype(float)


def call_payoff_samples(grid: Grid, strike: float) -> np.ndarray:
    """K*(e^x - 1)^+ on the closed nodes, i.e. the payoff with S = K e^x."""
    return strike * np.maximum(np.expm1(grid.closed_x_nodes), 0.0)


def linear_shift(values: np.ndarray, grid: Grid) -> tuple[np.ndarray, ShiftCoefficients]:
    """Subtract the secant line through the two closed-interval endpoints.

    ``values`` must hold the n+1 closed-node samples. The shifted samples
    vanish identically at both endpoints, so the periodic extension of the
    remainder is continuous.
    """
    values = np.asarray(values, dtype=float)
    if len(values) != grid.n + 1:
        raise ValueError(f"need {grid.n + 1} closed-node samples, got {len(values)}")
    x0, xn = grid.x_left, grid.x_right
    if xn == x0:
        raise ValueError("zero-length interval")
    a = (values[-1] - values[0]) / (xn - x0)
    b = (xn * values[0] - x0 * values[-1]) / (xn - x0)
    shifted = values - (a * grid.closed_x_nodes + b)
    return shifted, ShiftCoefficients(a, b, ShiftScheme.LINEAR)


def exponential_shift(values: np.ndarray, grid: Grid,
                      alpha: float) -> tuple[np.ndarray, ShiftCoefficients]:
    """Subtract h(x) = A e^x + B chosen so the damped remainder
    exp(alpha*x)(f - h) takes equal values at the two endpoints, and the
    damped slope condition exp(alpha*x)(f' - A e^x) matches there as well,
    with f' estimated by the second-order one-sided three-point stencils.

    Returns the undamped remainder f - h; callers apply the damping.
    """
    values = np.asarray(values, dtype=float)
    if len(values) != grid.n + 1:
        raise ValueError(f"need {grid.n + 1} closed-node samples, got {len(values)}")
    if len(values) < 3:
        raise ValueError("three-point one-sided stencils need at least 3 samples")
    dx = grid.dx
    x0, xn = grid.x_left, grid.x_right
    d0 = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dx)
    dn = (3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (2.0 * dx)
    ea0, ean = math.exp(alpha * x0), math.exp(alpha * xn)
    den = math.exp((alpha + 1.0) * xn) - math.exp((alpha + 1.0) * x0)
    if den == 0.0:
        raise ValueError("alpha = -1 makes the slope-matching system singular")
    a = (ean * dn - ea0 * d0) / den
    if ean == ea0:
        raise ValueError("alpha = 0 makes the value-matching system singular")
    b = (ean * values[-1] - ea0 * values[0] - a * den) / (ean - ea0)
    shifted = values - (a * np.exp(grid.closed_x_nodes) + b)
    return shifted, ShiftCoefficients(a, b, ShiftScheme.EXPONENTIAL)


def _psi_on_grid(grid: Grid, alpha: float, v: float, coeffs: MeasureCoefficients,
                 tau: float, r: float) -> np.ndarray:
    """Kernel on the centered frequency grid at p_k + i*alpha.

    psi(-p + i*alpha) = conj(psi(p + i*alpha)) for real p and alpha, so only
    the n/2 + 1 nonnegative frequencies are evaluated and the rest mirrored.
    """
    n = grid.n
    p_pos = np.arange(n // 2 + 1) * grid.dp
    arg = p_pos + 1j * alpha if alpha != 0.0 else p_pos
    vals = kernel_psi(arg, 0.0, v, coeffs, tau, r)
    out = np.empty(n, dtype=complex)
    out[n // 2:] = vals[: n // 2]
    out[: n // 2] = np.conj(vals[n // 2:0:-1])
    return out


def _convolve(grid: Grid, target: np.ndarray, psi_k: np.ndarray,
              freq_weights: bool) -> np.ndarray:
    """Weighted centered DFT -> kernel product -> inverse, on n samples."""
    w = trapezoid_weights(grid.n)
    fhat = dft_centered_values(w * target[: grid.n])
    wk = w if freq_weights else 1.0
    return idft_centered_values(wk * psi_k * fhat)


def cfft1_prob(grid: Grid, v: float, tau: float, coeffs: MeasureCoefficients,
               r: float, shift_cfg: ShiftDampConfig | None = None,
               freq_weights: bool = True) -> np.ndarray:
    """Exercise-probability curve on the closed grid nodes.

    With the linear shift the Heaviside target is replaced by its
    secant-shifted remainder before the transform, and A*E[x_T | x] + B is
    added back, with E[x_T | x] = x - i * dpsi/dp(0). ``freq_weights``
    toggles the diagnostic mode that omits the trapezoid weights from the
    frequency-domain product.
    """
    shift_cfg = shift_cfg or ShiftDampConfig()
    if shift_cfg.shift is ShiftScheme.EXPONENTIAL:
        raise ValueError("probability estimation supports shift in {none, linear}")
    target = heaviside_samples(grid)
    if shift_cfg.shift is ShiftScheme.LINEAR:
        target, sc = linear_shift(target, grid)
    else:
        sc = _NO_SHIFT
    conv = _convolve(grid, target, _psi_on_grid(grid, 0.0, v, coeffs, tau, r),
                     freq_weights).real
    drift = psi_gradient(0.0, 0.0, v, coeffs, tau, r)[0].imag
    x_cl = grid.closed_x_nodes
    out = np.empty(grid.n + 1)
    out[:-1] = conv + sc.a * (x_cl[:-1] + drift) + sc.b
    out[-1] = conv[0] + sc.a * (x_cl[-1] + drift) + sc.b
    return out


def cfft1_price(grid: Grid, strike: float, v: float, tau: float,
                params: HestonParams, mode: CoeffMode = CoeffMode.CONSISTENT,
                shift_cfg: ShiftDampConfig | None = None,
                freq_weights: bool = True) -> np.ndarray:
    """Call prices K e^x P1 - K e^{-r tau} P2 along the closed grid, spot
    parameterized as S = K e^x."""
    c1 = coefficients(params, Measure.P1, mode)
    c2 = coefficients(params, Measure.P2, mode)
    p1 = cfft1_prob(grid, v, tau, c1, params.r, shift_cfg, freq_weights)
    p2 = cfft1_prob(grid, v, tau, c2, params.r, shift_cfg, freq_weights)
    x_cl = grid.closed_x_nodes
    return strike * np.exp(x_cl) * p1 - strike * math.exp(-params.r * tau) * p2


def cfft2_price(grid: Grid, strike: float, v: float, tau: float,
                params: HestonParams, mode: CoeffMode = CoeffMode.CONSISTENT,
                shift_cfg: ShiftDampConfig | None = None,
                freq_weights: bool = True) -> np.ndarray:
    """Damped-payoff call prices along the closed grid.

    Pipeline: sample g(x) = K(e^x - 1)^+, subtract the exponential shift if
    requested, damp by exp(alpha*x), transform, multiply the kernel at
    p + i*alpha, invert, undamp, discount, and add back
    A * E[e^{x_T} | x] + B where E[e^{x_T} | x] = e^x psi_2(-i).
    """
    shift_cfg = shift_cfg or ShiftDampConfig(ShiftScheme.EXPONENTIAL, -2.0)
    if shift_cfg.shift is ShiftScheme.LINEAR:
        raise ValueError("the damped price scheme supports shift in {none, exponential}")
    alpha = shift_cfg.alpha
    if not damping_feasible(alpha, v, tau, params, mode):
        raise DampingInfeasibleError(
            f"damping-infeasible: psi_2 at p = -({alpha}+1)i is not finite "
            f"for tau = {tau}")
    coeffs = coefficients(params, Measure.P2, mode)
    x_cl = grid.closed_x_nodes
    g = call_payoff_samples(grid, strike)
    if shift_cfg.shift is ShiftScheme.EXPONENTIAL:
        g, sc = exponential_shift(g, grid, alpha)
    else:
        sc = _NO_SHIFT
    damped = np.exp(alpha * x_cl) * g
    conv = _convolve(grid, damped, _psi_on_grid(grid, alpha, v, coeffs, tau, params.r),
                     freq_weights)
    # E[e^{x_T} | x] on the closed nodes; psi_2(-i) is the exp(Z) moment
    fwd = np.exp(x_cl) * kernel_psi(-1j, 0.0, v, coeffs, tau, params.r).real
    disc = math.exp(-params.r * tau)
    out = np.empty(grid.n + 1)
    out[:-1] = disc * (conv.real * np.exp(-alpha * x_cl[:-1]) + sc.a * fwd[:-1] + sc.b)
    out[-1] = disc * (conv[0].real * math.exp(-alpha * x_cl[-1]) + sc.a * fwd[-1] + sc.b)
    return out


def damping_feasible(alpha: float, v: float, tau: float, params: HestonParams,
                     mode: CoeffMode = CoeffMode.CONSISTENT) -> bool:
    """Whether psi_2 evaluated at p = -(alpha+1)i is finite, i.e. the
    moment E[S_T^(alpha+1)] exists at this horizon.

    At purely imaginary p the zeta denominator is a real or rotating scalar
    whose first zero crossing marks the moment-explosion time; past it the
    closed form silently returns a finite but meaningless number, so the
    crossing time is computed explicitly instead of trusting exp overflow
    alone. Overflow in the final evaluation also maps to False.
    """
    coeffs = coefficients(params, Measure.P2, mode)
    omega = alpha + 1.0
    sig, rho, b, c = coeffs.sigma, coeffs.rho, coeffs.b, coeffs.c
    gamma_sq = sig**2 * (-omega**2 - 2.0 * c * omega) + (b - sig * rho * omega) ** 2
    lam = b - sig * rho * omega
    if gamma_sq > 0.0:
        gamma = math.sqrt(gamma_sq)
        # zeta denominator is gamma+lam + (gamma-lam) u with u = exp(-gamma t)
        if gamma != lam:
            u_cross = -(gamma + lam) / (gamma - lam)
            if 0.0 < u_cross < 1.0 and tau >= -math.log(u_cross) / gamma:
                return False
    elif gamma_sq == 0.0:
        if 2.0 + lam * tau <= 0.0:
            return False
    else:
        big_g = math.sqrt(-gamma_sq)
        theta = math.atan2(big_g, lam)          # in (0, pi)
        tau_star = 2.0 * (math.pi - theta) / big_g
        if tau >= tau_star:
            return False
    with np.errstate(over="ignore", invalid="ignore"):
        try:
            val = kernel_psi(-1j * omega, 0.0, v, coeffs, tau, params.r)
        except (SingularFrequencyError, FloatingPointError):
            return False
    return bool(np.isfinite(val.real) and np.isfinite(val.imag))
