"""Branch-safe joint characteristic function of (log-price, variance).

The increment kernel here is evaluated in a form whose complex logarithm
never winds around the origin: the time dependence enters only through
exp(-gamma*tau) with Re(gamma) >= 0, so the log argument stays in a fixed
half-plane and the integrand is continuous in the frequency variable. The
classical representation (``original_cf``) keeps its exp(+gamma*tau) factor
and a naive principal-branch logarithm on purpose: it is the comparison
path that exhibits the phase discontinuity.

All frequency arguments accept scalars or numpy arrays; ``p`` may be
complex (damped transforms evaluate the kernel off the real axis), ``q``
stays real.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import MeasureCoefficients

__all__ = [
    "CharFnIntermediates", "AsymptoticConstants", "SingularFrequencyError",
    "PoleInGError", "intermediates", "kernel_psi", "log_kernel_psi",
    "joint_cf", "original_cf", "log_original_cf", "psi_gradient",
    "asymptotics",
]


class SingularFrequencyError(ArithmeticError):
    """The intermediates degenerate (gamma = 0 or a vanishing denominator)."""


class PoleInGError(ArithmeticError):
    """pole-in-g: the classical representation's g-ratio has a zero denominator."""


@dataclass(frozen=True)
class CharFnIntermediates:
    """gamma, lambda and the decaying-form zeta, plus the two reduced ratios
    alpha_ab = (gamma+lambda)/sigma^2 and beta_ab = (gamma-lambda)/sigma^2."""

    gamma: np.ndarray | complex
    lam: np.ndarray | complex
    zeta: np.ndarray | complex
    alpha_ab: np.ndarray | complex
    beta_ab: np.ndarray | complex


def _as_complex(p):
    arr = np.asarray(p, dtype=complex)
    return arr, arr.ndim == 0


def _maybe_scalar(value, scalar: bool):
    if scalar:
        return complex(value)
    return value


def intermediates(p, q, coeffs: MeasureCoefficients, tau: float) -> CharFnIntermediates:
    """Evaluate gamma (principal square root), lambda and zeta.

    zeta uses the exp(-gamma*tau) arrangement so nothing overflows for
    large |p|*tau. A vanishing gamma or zeta denominator (possible only at
    isolated complex p) raises SingularFrequencyError.
    """
    if tau <= 0.0:
        raise ValueError(f"tau must be > 0, got {tau}")
    parr, scalar = _as_complex(p)
    sig, rho, b, c = coeffs.sigma, coeffs.rho, coeffs.b, coeffs.c
    gamma = np.sqrt(sig**2 * (parr * parr - 2j * c * parr) + (b - 1j * sig * rho * parr) ** 2)
    lam = b - 1j * sig * rho * parr - 1j * sig**2 * q
    denom = gamma + lam + (gamma - lam) * np.exp(-gamma * tau)
    if np.any(gamma == 0) or np.any(denom == 0):
        raise SingularFrequencyError(
            "singular-frequency: gamma or the zeta denominator vanished")
    zeta = 2.0 * gamma / denom
    return CharFnIntermediates(
        gamma=_maybe_scalar(gamma, scalar),
        lam=_maybe_scalar(lam, scalar),
        zeta=_maybe_scalar(zeta, scalar),
        alpha_ab=_maybe_scalar((gamma + lam) / sig**2, scalar),
        beta_ab=_maybe_scalar((gamma - lam) / sig**2, scalar),
    )


def log_kernel_psi(p, q, v: float, coeffs: MeasureCoefficients, tau: float, r: float):
    """Exponent of the increment kernel; psi = exp(log_kernel_psi).

    Useful on its own when |psi| underflows (phase scans at large |p|) and
    for overflow-free moment checks.
    """
    ints = intermediates(p, q, coeffs, tau)
    parr, scalar = _as_complex(p)
    a, sig = coeffs.a, coeffs.sigma
    expo = (1j * parr * r * tau + 1j * q * a * tau
            + ints.alpha_ab * (1.0 - ints.zeta) * v
            - ints.beta_ab * a * tau
            + (2.0 * a / sig**2) * np.log(ints.zeta))
    return _maybe_scalar(expo, scalar)


def kernel_psi(p, q, v: float, coeffs: MeasureCoefficients, tau: float, r: float):
    """Characteristic function of the state increment over the remaining
    life: independent of the starting log-price, which is what makes the
    pricing problem a convolution."""
    return np.exp(log_kernel_psi(p, q, v, coeffs, tau, r))


def joint_cf(p, q, x: float, v: float, coeffs: MeasureCoefficients, tau: float, r: float):
    """Joint characteristic function at state (x, v); equals
    exp(i(p*x + q*v)) * kernel_psi identically."""
    parr, scalar = _as_complex(p)
    expo = log_kernel_psi(parr, q, v, coeffs, tau, r) + 1j * parr * x + 1j * q * v
    return _maybe_scalar(np.exp(expo), scalar)


def log_original_cf(p, x: float, v: float, coeffs: MeasureCoefficients,
                    tau: float, r: float):
    """Exponent C + D*v + i*p*x of the classical representation (q = 0).

    Deliberately not branch-corrected: the log of the g-ratio uses the
    principal branch and the exp(+gamma*tau) factor, reproducing the
    textbook form together with its phase jumps.
    """
    if tau <= 0.0:
        raise ValueError(f"tau must be > 0, got {tau}")
    parr, scalar = _as_complex(p)
    sig, rho, b, c, a = coeffs.sigma, coeffs.rho, coeffs.b, coeffs.c, coeffs.a
    gamma = np.sqrt(sig**2 * (parr * parr - 2j * c * parr) + (b - 1j * sig * rho * parr) ** 2)
    lam0 = b - 1j * sig * rho * parr
    gden = lam0 - gamma
    if np.any(gden == 0):
        raise PoleInGError("pole-in-g: b - i*sigma*rho*p - gamma vanished")
    g = (lam0 + gamma) / gden
    egt = np.exp(gamma * tau)
    big_c = 1j * parr * r * tau + (a / sig**2) * (
        (lam0 + gamma) * tau - 2.0 * np.log((1.0 - g * egt) / (1.0 - g)))
    big_d = (lam0 + gamma) / sig**2 * (1.0 - egt) / (1.0 - g * egt)
    return _maybe_scalar(big_c + big_d * v + 1j * parr * x, scalar)


def original_cf(p, x: float, v: float, coeffs: MeasureCoefficients, tau: float, r: float):
    """Classical characteristic function exp(C + D*v + i*p*x)."""
    return np.exp(log_original_cf(p, x, v, coeffs, tau, r))


def psi_gradient(p, q, v: float, coeffs: MeasureCoefficients, tau: float, r: float):
    """Closed-form (d psi/d p, d psi/d q) of the increment kernel."""
    ints = intermediates(p, q, coeffs, tau)
    parr, scalar = _as_complex(p)
    sig, rho, b, c, a = coeffs.sigma, coeffs.rho, coeffs.b, coeffs.c, coeffs.a
    gamma, zeta = np.asarray(ints.gamma), np.asarray(ints.zeta)
    alpha, beta = np.asarray(ints.alpha_ab), np.asarray(ints.beta_ab)
    egt = np.exp(-gamma * tau)
    apb = alpha + beta                         # 2*gamma/sigma^2, nonzero
    gamma_p = (sig**2 * (1.0 - rho**2) * parr - 1j * (sig**2 * c + sig * rho * b)) / gamma
    alpha_p = (gamma_p - 1j * sig * rho) / sig**2
    beta_p = (gamma_p + 1j * sig * rho) / sig**2
    common = gamma_p * tau * (1.0 - alpha * zeta / apb)
    zeta_p = ((alpha_p + beta_p) / apb * zeta
              - (alpha_p + beta_p * egt) / apb * zeta**2
              + common * zeta)
    zeta_q = 1j * (1.0 - egt) / apb * zeta**2
    zeta_1 = ((alpha_p + beta_p) / apb
              - (alpha_p + beta_p * egt) / apb * zeta
              + common)
    zeta_2 = 1j * (1.0 - egt) / apb * zeta
    psi = np.exp(1j * parr * r * tau + 1j * q * a * tau
                 + alpha * (1.0 - zeta) * v - beta * a * tau
                 + (2.0 * a / sig**2) * np.log(zeta))
    dpsi_dp = psi * (1j * r * tau + (alpha_p * (1.0 - zeta) - alpha * zeta_p) * v
                     - beta_p * a * tau + (2.0 * a / sig**2) * zeta_1)
    # alpha_q = -i and beta_q = +i; the i*a*tau terms cancel exactly
    dpsi_dq = psi * ((-1j * (1.0 - zeta) - alpha * zeta_q) * v
                     + (2.0 * a / sig**2) * zeta_2)
    return _maybe_scalar(dpsi_dp, scalar), _maybe_scalar(dpsi_dq, scalar)


@dataclass(frozen=True)
class AsymptoticConstants:
    """Large-|p| envelope data: |psi(p)| ~ O(exp(-d*|p|)) with amplitude
    scale a_inf and linear phase b_inf(p). The slope/offset pairs are the
    one-sided limits for p -> +inf and p -> -inf."""

    a_inf: float
    d: float
    b_slope_pos: float
    b_slope_neg: float
    b_offset_pos: float
    b_offset_neg: float

    def b_inf(self, p: float) -> float:
        if p >= 0.0:
            return self.b_offset_pos + self.b_slope_pos * p
        return self.b_offset_neg + self.b_slope_neg * p


def asymptotics(v: float, coeffs: MeasureCoefficients, tau: float) -> AsymptoticConstants:
    """Decay constant d = sqrt(1-rho^2)(v + a*tau)/sigma plus the amplitude
    and phase constants of the large-frequency envelope."""
    sig, rho, a = coeffs.sigma, coeffs.rho, coeffs.a
    w = 1.0 - rho**2
    a_inf = (4.0 * w) ** (a / sig**2)
    d = math.sqrt(w) * (v + a * tau) / sig
    two_a = 2.0 * a / sig**2
    return AsymptoticConstants(
        a_inf=a_inf,
        d=d,
        b_slope_pos=-rho * (v + a * tau) / sig,
        b_slope_neg=-rho * (v - a * tau) / sig,
        b_offset_pos=two_a * math.asin(rho),
        b_offset_neg=two_a * math.asin(-rho),
    )
