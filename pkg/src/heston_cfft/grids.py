"""Centered truncated lattices and the matching discrete transform pair.

Spatial nodes x_n = center + (n - N/2) dx and frequency nodes
p_k = (k - N/2) dp with dx*dp = 2*pi/N. The centered DFT is the plain FFT
conjugated by (-1)^n sign flips (plus a global (-1)^{N/2} so that the
transform of exp(i p_k x) is exactly an impulse of height N at bin k);
forward and inverse compose to the identity by construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Grid", "SampledFunction", "build_grid", "trapezoid_weights",
           "dft_centered", "idft_centered", "dft_centered_values",
           "idft_centered_values"]


@dataclass(frozen=True)
class Grid:
    """Length-``length`` interval centered at ``center`` with ``n`` samples."""

    center: float
    length: float
    n: int

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def dp(self) -> float:
        return 2.0 * math.pi / self.length

    @property
    def x_nodes(self) -> np.ndarray:
        return self.center + (np.arange(self.n) - self.n // 2) * self.dx

    @property
    def p_nodes(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dp

    @property
    def x_left(self) -> float:
        return self.center - self.length / 2.0

    @property
    def x_right(self) -> float:
        """Right endpoint of the closed interval, one step past the last sample."""
        return self.center + self.length / 2.0

    @property
    def closed_x_nodes(self) -> np.ndarray:
        """All n+1 nodes of the closed interval [x_left, x_right]."""
        return self.center + (np.arange(self.n + 1) - self.n // 2) * self.dx


def build_grid(center: float, length: float, n: int) -> Grid:
    """Validated grid constructor. n must be even (the N/2 offset in the
    centered transform requires it) and at least 4."""
    if n % 2 != 0 or n < 4:
        raise ValueError(f"n must be an even integer >= 4, got {n}")
    if not (math.isfinite(length) and length > 0.0):
        raise ValueError(f"length must be > 0, got {length}")
    if not math.isfinite(center):
        raise ValueError(f"center must be finite, got {center}")
    return Grid(center=float(center), length=float(length), n=int(n))


@dataclass(frozen=True)
class SampledFunction:
    """Complex samples bound to their grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.grid.n:
            raise ValueError(
                f"length mismatch: {len(self.values)} values on a grid of {self.grid.n}")


def trapezoid_weights(n: int) -> np.ndarray:
    """Composite trapezoid weights on the closed truncated interval:
    1/2 at both ends of the sample array, 1 inside. Scaled by dx at use site."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    w = np.ones(n)
    w[0] = 0.5
    w[-1] = 0.5
    return w


def _signs(n: int) -> np.ndarray:
    s = np.ones(n)
    s[1::2] = -1.0
    return s


def dft_centered_values(values: np.ndarray) -> np.ndarray:
    """F_k = sum_n f_n exp(-i p_k xi_n) over centered node offsets xi_n."""
    n = len(values)
    s = _signs(n)
    pm = -1.0 if (n // 2) % 2 else 1.0
    return pm * s * np.fft.fft(s * values)


def idft_centered_values(values: np.ndarray) -> np.ndarray:
    """f_n = (1/N) sum_k F_k exp(+i p_k xi_n); exact inverse of the forward."""
    n = len(values)
    s = _signs(n)
    pm = -1.0 if (n // 2) % 2 else 1.0
    return pm * s * np.fft.ifft(s * values)


def dft_centered(f: SampledFunction) -> SampledFunction:
    return SampledFunction(f.grid, dft_centered_values(np.asarray(f.values, dtype=complex)))


def idft_centered(f: SampledFunction) -> SampledFunction:
    return SampledFunction(f.grid, idft_centered_values(np.asarray(f.values, dtype=complex)))
