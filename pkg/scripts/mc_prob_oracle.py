#!/usr/bin/env python3
"""Monte Carlo oracle for the risk-neutral exercise probability at S = K.

Full-truncation Euler on the log-price/variance system, 1e7 paths,
500 steps, fixed seed. Prints the estimate and its standard error;
the frozen numbers go into tests/test_quadrature.py.
"""
import numpy as np

KAPPA, THETA, SIGMA, RHO, LAM, R = 3.0, 0.1, 0.25, -0.8, 1.0, 0.03
V0, TAU = 0.1, 1.0
KBAR = KAPPA + SIGMA * LAM
A = KAPPA * THETA
B2 = KBAR                      # risk-neutral reversion, consistent mode

N_PATHS = 10_000_000
N_STEPS = 500
SEED = 20240817
CHUNK = 250_000


def simulate_chunk(rng, n):
    dt = TAU / N_STEPS
    sdt = np.sqrt(dt)
    x = np.zeros(n)
    v = np.full(n, V0)
    for _ in range(N_STEPS):
        z1 = rng.standard_normal(n)
        z2 = rng.standard_normal(n)
        w1 = z1
        w2 = RHO * z1 + np.sqrt(1.0 - RHO * RHO) * z2
        vp = np.maximum(v, 0.0)
        sv = np.sqrt(vp)
        x += (R - 0.5 * vp) * dt + sv * sdt * w2
        v += (A - B2 * vp) * dt + SIGMA * sv * sdt * w1
    return x


def main():
    rng = np.random.default_rng(SEED)
    hits = 0
    done = 0
    while done < N_PATHS:
        n = min(CHUNK, N_PATHS - done)
        x = simulate_chunk(rng, n)
        hits += int(np.count_nonzero(x >= 0.0))
        done += n
        print(f"  {done:>9d} paths, running P2 = {hits/done:.6f}", flush=True)
    p = hits / N_PATHS
    se = np.sqrt(p * (1.0 - p) / N_PATHS)
    print(f"P2(x=0) = {p:.8f}  se = {se:.3e}  paths={N_PATHS} steps={N_STEPS} seed={SEED}")


if __name__ == "__main__":
    main()
