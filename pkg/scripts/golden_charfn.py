#!/usr/bin/env python3
"""Generate frozen reference values for the characteristic-function tests.

Two independent routes, neither shared with the library code:

1. 50-digit evaluation of the gamma/lambda/zeta intermediates and the
   increment kernel with mpmath.
2. Fourth-order Runge-Kutta integration of the underlying Riccati ODE
   system at step 1e-5, which never touches the closed-form solution.

Run from the repo root and paste the printed literals into
tests/test_charfn.py.
"""
import mpmath as mp

mp.mp.dps = 50

# demo parameter set, risk-neutral measure, Heston-consistent reversion
SIGMA = mp.mpf("0.25")
RHO = mp.mpf("-0.8")
KAPPA = mp.mpf("3")
THETA = mp.mpf("0.1")
LAM = mp.mpf("1")
R = mp.mpf("0.03")
V0 = mp.mpf("0.1")
TAU = mp.mpf("1")

KBAR = KAPPA + SIGMA * LAM          # 3.25
A = KAPPA * THETA                   # 0.3
B2 = KBAR                           # measure-2, consistent mode
C2 = mp.mpf("-0.5")


def intermediates(p, q, b, c):
    gam = mp.sqrt(SIGMA**2 * (p * p - 2j * c * p) + (b - 1j * SIGMA * RHO * p) ** 2)
    lam = b - 1j * SIGMA * RHO * p - 1j * SIGMA**2 * q
    zeta = 2 * gam / (gam + lam + (gam - lam) * mp.e**(-gam * TAU))
    return gam, lam, zeta


def kernel(p, q, b, c):
    gam, lam, zeta = intermediates(p, q, b, c)
    expo = (1j * p * R * TAU + 1j * q * A * TAU
            + (gam + lam) / SIGMA**2 * (1 - zeta) * V0
            - (gam - lam) / SIGMA**2 * A * TAU
            + 2 * A / SIGMA**2 * mp.log(zeta))
    return mp.e**expo


def riccati_kernel(p, q, b, c, h=mp.mpf("1e-5")):
    """RK4 on beta' = s^2/2 beta^2 - lam0 beta - (p^2 - 2icp)/2, beta(0)=iq."""
    lam0 = b - 1j * SIGMA * RHO * p
    const = (p * p - 2j * c * p) / 2

    def fb(beta):
        return SIGMA**2 / 2 * beta * beta - lam0 * beta - const

    beta = 1j * q
    cacc = mp.mpc(0)
    n = int(TAU / h)
    for _ in range(n):
        k1 = fb(beta)
        k2 = fb(beta + h / 2 * k1)
        k3 = fb(beta + h / 2 * k2)
        k4 = fb(beta + h * k3)
        # trapezoid-in-simpson accumulation of c' = ipr + a*beta
        b_mid = beta + h / 2 * k1
        b_next = beta + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        cacc += h / 6 * (A * beta + 4 * A * (beta + h / 2 * k2) + A * b_next)
        beta = b_next
    cacc += 1j * p * R * TAU
    return mp.e**(cacc + beta * V0 - 1j * q * V0)


def fmt(z):
    return f"{mp.nstr(mp.re(z), 22)} {'+' if mp.im(z) >= 0 else '-'} {mp.nstr(abs(mp.im(z)), 22)}j"


if __name__ == "__main__":
    mp.mp.dps = 50
    print("# p=1, q=0, measure P2 consistent, tau=1 (50-digit closed form)")
    gam, lam, zeta = intermediates(mp.mpf(1), mp.mpf(0), B2, C2)
    print("gamma =", fmt(gam))
    print("lambda=", fmt(lam))
    print("zeta  =", fmt(zeta))
    print("psi(1,0) =", fmt(kernel(mp.mpf(1), mp.mpf(0), B2, C2)))
    print()
    print("# psi(10, 0) golden: closed form vs RK4 Riccati (h=1e-5)")
    mp.mp.dps = 30
    cf = kernel(mp.mpf(10), mp.mpf(0), B2, C2)
    ode = riccati_kernel(mp.mpf(10), mp.mpf(0), B2, C2)
    print("closed =", fmt(cf))
    print("rk4    =", fmt(ode))
    print("abs diff =", mp.nstr(abs(cf - ode), 5))
